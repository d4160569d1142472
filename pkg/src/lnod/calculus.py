"""Display-style sequent calculus over the structural contexts

    X ::= I | A | #X | @X | X , Y | X >> Y

(``#`` is ♯, ``@`` is ♭, ``,`` is ⬠, ``>>`` is the structural arrow).
Structures are read as formulas by polarity: ``I`` is ⊤/⊥, ``,`` is ∧/∨,
``>>`` is −</→, ``#`` is ▶/▷ and ``@`` is ◁/◀ (antecedent/succedent).

Rules act on whole sequents; the display postulates move substructures to the
top level.  :func:`prove_bounded` searches backwards with loop checking and
returns derivations that :func:`check_derivation` re-verifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .kripke import KripkeModel, extension_mask
from .syntax import (And, Atom, BNegL, BNegR, Bot, Excl, Formula, FormulaParser, Imp,
                     Or, ParseError, Top, WNegL, WNegR, subformulas, to_text, tokenize)

__all__ = [
    "Unit", "Form", "Sharp", "Flat", "Comma", "Arrow", "Structure", "Sequent",
    "Derivation", "RuleError", "RULES", "AC_RULES", "interpret_structure",
    "apply_rule", "check_derivation", "CheckResult", "prove_bounded", "ProofResult",
    "soundness_check", "SoundnessReport", "sequent_holds", "parse_structure",
    "parse_sequent", "structure_text", "sequent_text", "derivation_text",
    "parse_derivation", "normal_form",
]


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Form:
    f: Formula


@dataclass(frozen=True)
class Sharp:
    inner: "Structure"


@dataclass(frozen=True)
class Flat:
    inner: "Structure"


@dataclass(frozen=True)
class Comma:
    left: "Structure"
    right: "Structure"


@dataclass(frozen=True)
class Arrow:
    left: "Structure"
    right: "Structure"


Structure = Union[Unit, Form, Sharp, Flat, Comma, Arrow]


@dataclass(frozen=True)
class Sequent:
    ante: Structure
    succ: Structure

    def __str__(self):
        return sequent_text(self)


@dataclass(frozen=True)
class Derivation:
    root: Sequent
    rule: str
    premises: tuple = ()

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


class RuleError(KeyError):
    pass


# -- interpretation ------------------------------------------------------------

def interpret_structure(s: Structure, polarity: str = "ante") -> Formula:
    """Formula image of a structure in antecedent (``"ante"``) or succedent
    (``"succ"``) position."""
    if polarity not in ("ante", "succ"):
        raise ValueError("polarity must be 'ante' or 'succ'")
    ante = polarity == "ante"
    if isinstance(s, Unit):
        return Top() if ante else Bot()
    if isinstance(s, Form):
        return s.f
    if isinstance(s, Comma):
        l, r = interpret_structure(s.left, polarity), interpret_structure(s.right, polarity)
        return And(l, r) if ante else Or(l, r)
    if isinstance(s, Arrow):
        l = interpret_structure(s.left, "ante")
        r = interpret_structure(s.right, "succ")
        return Excl(l, r) if ante else Imp(l, r)
    if isinstance(s, Sharp):
        return BNegR(interpret_structure(s.inner, "succ")) if ante \
            else WNegR(interpret_structure(s.inner, "ante"))
    if isinstance(s, Flat):
        return WNegL(interpret_structure(s.inner, "succ")) if ante \
            else BNegL(interpret_structure(s.inner, "ante"))
    raise TypeError(f"not a structure: {s!r}")


def sequent_holds(m: KripkeModel, s: Sequent) -> bool:
    a = extension_mask(m, interpret_structure(s.ante, "ante"))
    b = extension_mask(m, interpret_structure(s.succ, "succ"))
    return a & ~b == 0


# -- rules ---------------------------------------------------------------------

def _F(s, kind):
    return isinstance(s, Form) and isinstance(s.f, kind)


def _axiom(test):
    def rule(g: Sequent):
        return [[]] if test(g) else []
    return rule


def _counit(outer, inner):
    return _axiom(lambda g: _F(g.ante, outer) and isinstance(g.ante.f.inner, inner)
                  and isinstance(g.succ, Form) and g.ante.f.inner.inner == g.succ.f)


def _unit(outer, inner):
    return _axiom(lambda g: _F(g.succ, outer) and isinstance(g.succ.f.inner, inner)
                  and isinstance(g.ante, Form) and g.succ.f.inner.inner == g.ante.f)


def _dp_comma(g):
    out = []
    if isinstance(g.ante, Comma):
        out.append([Sequent(g.ante.left, Arrow(g.ante.right, g.succ))])
    if isinstance(g.succ, Arrow):
        out.append([Sequent(Comma(g.ante, g.succ.left), g.succ.right)])
    return out


def _dp_arrow(g):
    out = []
    if isinstance(g.ante, Arrow):
        out.append([Sequent(g.ante.left, Comma(g.ante.right, g.succ))])
    if isinstance(g.succ, Comma):
        out.append([Sequent(Arrow(g.ante, g.succ.left), g.succ.right)])
    return out


def _dp_sharp_l(g):
    out = []
    if isinstance(g.ante, Sharp):
        out.append([Sequent(Flat(g.succ), g.ante.inner)])
    if isinstance(g.ante, Flat):
        out.append([Sequent(Sharp(g.succ), g.ante.inner)])
    return out


def _dp_sharp_r(g):
    out = []
    if isinstance(g.succ, Sharp):
        out.append([Sequent(g.succ.inner, Flat(g.ante))])
    if isinstance(g.succ, Flat):
        out.append([Sequent(g.succ.inner, Sharp(g.ante))])
    return out


def _sides(side):
    """Build a rule acting on one side; ``side`` is "ante" or "succ"."""
    def get(g):
        return g.ante if side == "ante" else g.succ

    def put(g, s):
        return Sequent(s, g.succ) if side == "ante" else Sequent(g.ante, s)
    return get, put


def _assoc(side):
    get, put = _sides(side)

    def rule(g):
        s = get(g)
        out = []
        if isinstance(s, Comma) and isinstance(s.left, Comma):
            out.append([put(g, Comma(s.left.left, Comma(s.left.right, s.right)))])
        if isinstance(s, Comma) and isinstance(s.right, Comma):
            out.append([put(g, Comma(Comma(s.left, s.right.left), s.right.right))])
        return out
    return rule


def _comm(side):
    get, put = _sides(side)

    def rule(g):
        s = get(g)
        return [[put(g, Comma(s.right, s.left))]] if isinstance(s, Comma) else []
    return rule


def _unit_i(side):
    get, put = _sides(side)

    def rule(g):
        s = get(g)
        out = [[put(g, Comma(s, Unit()))], [put(g, Comma(Unit(), s))]]
        if isinstance(s, Comma) and isinstance(s.right, Unit):
            out.append([put(g, s.left)])
        if isinstance(s, Comma) and isinstance(s.left, Unit):
            out.append([put(g, s.right)])
        return out
    return rule


def _weaken(side):
    get, put = _sides(side)

    def rule(g):
        s = get(g)
        if not isinstance(s, Comma):
            return []
        return [[put(g, s.left)], [put(g, s.right)]]
    return rule


def _contract(side):
    get, put = _sides(side)

    def rule(g):
        s = get(g)
        return [[put(g, Comma(s, s))]]
    return rule


def _and_l(g):
    if _F(g.ante, And):
        return [[Sequent(Comma(Form(g.ante.f.left), Form(g.ante.f.right)), g.succ)]]
    return []


def _and_r(g):
    if _F(g.succ, And) and isinstance(g.ante, Comma):
        a = g.succ.f
        return [[Sequent(g.ante.left, Form(a.left)), Sequent(g.ante.right, Form(a.right))]]
    return []


def _or_r(g):
    if _F(g.succ, Or):
        return [[Sequent(g.ante, Comma(Form(g.succ.f.left), Form(g.succ.f.right)))]]
    return []


def _or_l(g):
    if _F(g.ante, Or) and isinstance(g.succ, Comma):
        a = g.ante.f
        return [[Sequent(Form(a.left), g.succ.left), Sequent(Form(a.right), g.succ.right)]]
    return []


def _imp_r(g):
    if _F(g.succ, Imp):
        return [[Sequent(g.ante, Arrow(Form(g.succ.f.left), Form(g.succ.f.right)))]]
    return []


def _imp_l(g):
    if _F(g.ante, Imp) and isinstance(g.succ, Arrow):
        a = g.ante.f
        return [[Sequent(g.succ.left, Form(a.left)), Sequent(Form(a.right), g.succ.right)]]
    return []


def _excl_l(g):
    if _F(g.ante, Excl):
        return [[Sequent(Arrow(Form(g.ante.f.left), Form(g.ante.f.right)), g.succ)]]
    return []


def _excl_r(g):
    if isinstance(g.succ, Comma) and _F(g.succ.left, Excl):
        a = g.succ.left.f
        return [[Sequent(g.ante, Form(a.left)), Sequent(Form(a.right), g.succ.right)]]
    return []


def _modal_l(kind, wrap):
    def rule(g):
        if _F(g.ante, kind):
            return [[Sequent(wrap(Form(g.ante.f.inner)), g.succ)]]
        return []
    return rule


def _modal_r(kind, wrap):
    def rule(g):
        if _F(g.succ, kind):
            return [[Sequent(g.ante, wrap(Form(g.succ.f.inner)))]]
        return []
    return rule


def _shift(kind, wrap):
    def rule(g):
        if _F(g.ante, kind):
            return [[Sequent(wrap(g.succ), Form(g.ante.f.inner))]]
        return []
    return rule


def _cut(g, cut_formulas: Iterable[Formula] = ()):
    return [[Sequent(g.ante, Form(a)), Sequent(Form(a), g.succ)] for a in cut_formulas]


RULES: dict[str, Callable] = {
    # axioms
    "id": _axiom(lambda g: isinstance(g.ante, Form) and g.ante == g.succ),
    "topR": _axiom(lambda g: isinstance(g.ante, Unit) and _F(g.succ, Top)),
    "botL": _axiom(lambda g: _F(g.ante, Bot) and isinstance(g.succ, Unit)),
    "counit-b>w<": _counit(BNegR, WNegL),
    "counit-w<b>": _counit(WNegL, BNegR),
    "unit-w>b<": _unit(WNegR, BNegL),
    "unit-b<w>": _unit(BNegL, WNegR),
    # logical
    "andL": _and_l, "orR": _or_r, "impR": _imp_r, "exclL": _excl_l,
    "b>L": _modal_l(BNegR, Sharp), "w>R": _modal_r(WNegR, Sharp),
    "w<L": _modal_l(WNegL, Flat), "b<R": _modal_r(BNegL, Flat),
    "andR": _and_r, "orL": _or_l, "impL": _imp_l, "exclR": _excl_r,
    "b>shift": _shift(BNegR, Flat), "w<shift": _shift(WNegL, Sharp),
    # display postulates
    "dp-comma": _dp_comma, "dp-arrow": _dp_arrow,
    "dp-sharpL": _dp_sharp_l, "dp-sharpR": _dp_sharp_r,
    # structural
    "assocL": _assoc("ante"), "assocR": _assoc("succ"),
    "commL": _comm("ante"), "commR": _comm("succ"),
    "unitL": _unit_i("ante"), "unitR": _unit_i("succ"),
    "wkL": _weaken("ante"), "wkR": _weaken("succ"),
    "ctrL": _contract("ante"), "ctrR": _contract("succ"),
    "cut": _cut,
}

AXIOMS = ("id", "topR", "botL", "counit-b>w<", "counit-w<b>", "unit-w>b<", "unit-b<w>")
INVERTIBLE = ("andL", "orR", "impR", "exclL", "b>L", "w>R", "w<L", "b<R")
BRANCHING = ("andR", "orL", "impL", "exclR", "b>shift", "w<shift",
             "dp-comma", "dp-arrow", "dp-sharpL", "dp-sharpR",
             "wkL", "wkR", "unitL", "unitR", "assocL", "assocR", "commL", "commR",
             "ctrL", "ctrR")
AC_RULES = frozenset({"assocL", "assocR", "commL", "commR"})
WEAKENING = frozenset({"wkL", "wkR"})
CONTRACTION = frozenset({"ctrL", "ctrR"})


def apply_rule(rule: str, goal: Sequent, cut_formulas: Iterable[Formula] = ()) -> list:
    """Backward application: every premise list from which ``rule`` concludes
    ``goal`` (empty when inapplicable).  Cut needs explicit candidate formulas."""
    try:
        fn = RULES[rule]
    except KeyError:
        raise RuleError(f"unknown rule {rule!r}") from None
    if rule == "cut":
        return fn(goal, cut_formulas)
    return fn(goal)


# -- derivation checking -------------------------------------------------------

@dataclass
class CheckResult:
    ok: bool
    path: tuple = ()   # premise indices from the root to the first bad node
    message: str = ""

    def __bool__(self):
        return self.ok


def check_derivation(d: Derivation, allow_cut: bool = False, weakening: bool = True,
                     contraction: bool = True) -> CheckResult:
    """Verify that every node is an instance of its rule over its premises."""
    stack = [(d, ())]
    while stack:
        node, path = stack.pop()
        if node.rule not in RULES:
            return CheckResult(False, path, f"unknown rule {node.rule!r}")
        if node.rule == "cut" and not allow_cut:
            return CheckResult(False, path, "cut is disabled")
        if node.rule in WEAKENING and not weakening or \
                node.rule in CONTRACTION and not contraction:
            return CheckResult(False, path, f"{node.rule} is disabled")
        prem = [p.root for p in node.premises]
        if node.rule == "cut":
            ok = (len(prem) == 2 and isinstance(prem[0].succ, Form)
                  and prem[0].succ == prem[1].ante and prem[0].ante == node.root.ante
                  and prem[1].succ == node.root.succ)
        else:
            ok = prem in apply_rule(node.rule, node.root)
        if not ok:
            return CheckResult(False, path,
                               f"{node.rule} does not conclude {sequent_text(node.root)}")
        for i, p in enumerate(node.premises):
            stack.append((p, path + (i,)))
    return CheckResult(True)


# -- proof search --------------------------------------------------------------

def _flatten(s, out):
    if isinstance(s, Comma):
        _flatten(s.left, out)
        _flatten(s.right, out)
    else:
        out.append(normal_form(s))


def normal_form(s):
    """Comma trees flattened and sorted; other constructors kept in place."""
    if isinstance(s, Sequent):
        return (normal_form(s.ante), normal_form(s.succ))
    if isinstance(s, Comma):
        parts: list = []
        _flatten(s, parts)
        return ("," , tuple(sorted(parts, key=repr)))
    if isinstance(s, Sharp):
        return ("#", normal_form(s.inner))
    if isinstance(s, Flat):
        return ("@", normal_form(s.inner))
    if isinstance(s, Arrow):
        return (">>", normal_form(s.left), normal_form(s.right))
    return s


def _has_top_unit(s) -> bool:
    parts: list = []
    _flatten(s, parts)
    return any(isinstance(p, Unit) for p in parts)


@dataclass
class ProofResult:
    status: str                   # "found", "not-found" or "budget"
    derivation: Derivation | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


class _Budget(Exception):
    pass


MAX_AC_RUN = 3


def prove_bounded(goal: Sequent, depth: int, allow_cut: bool = False, weakening: bool = True,
                  contraction: bool = True, budget: int = 500_000) -> ProofResult:
    """Backward proof search up to derivation height ``depth``.

    Iterative deepening makes the returned derivation a shortest one found by
    the strategy.  ``not-found`` is not a refutation; ``budget`` means the node
    budget ran out before the bounded space was exhausted.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    cut_formulas: list = []
    if allow_cut:
        seen: dict = {}
        for s in (goal.ante, goal.succ):
            for f in _formulas_in(s):
                for g in subformulas(f):
                    seen.setdefault(g, None)
        cut_formulas = list(seen)

    disabled = set()
    if not weakening:
        disabled |= WEAKENING
    if not contraction:
        disabled |= CONTRACTION
    failed: dict = {}   # sequent -> largest height known to fail
    count = [0]

    def candidates(g: Sequent):
        for r in AXIOMS:
            for prem in RULES[r](g):
                yield r, prem
        for r in INVERTIBLE:
            ps = RULES[r](g)
            if ps:
                yield r, ps[0]
                return
        for r in BRANCHING:
            if r in disabled:
                continue
            for prem in RULES[r](g):
                if r in ("unitL", "unitR"):
                    side = g.ante if r == "unitL" else g.succ
                    new = prem[0].ante if r == "unitL" else prem[0].succ
                    if _has_top_unit(side) and _size(new) > _size(side):
                        continue
                if r in CONTRACTION:
                    side = g.ante if r == "ctrL" else g.succ
                    if not isinstance(side, Form):
                        continue
                yield r, prem
        if allow_cut:
            for prem in _cut(g, cut_formulas):
                yield "cut", prem

    def search(g: Sequent, h: int, nf_anc: frozenset, exact_anc: frozenset, ac_run: int):
        if failed.get(g, 0) >= h:
            return None
        count[0] += 1
        if count[0] > budget:
            raise _Budget
        for rule, prem in candidates(g):
            if prem and h == 1:
                continue
            is_ac = rule in AC_RULES
            if is_ac and ac_run >= MAX_AC_RUN:
                continue
            subs = []
            for p in prem:
                if is_ac:
                    if p in exact_anc:
                        break
                elif normal_form(p) in nf_anc:
                    break
                nf = nf_anc | {normal_form(p)}
                d = search(p, h - 1, nf, exact_anc | {p}, ac_run + 1 if is_ac else 0)
                if d is None:
                    break
                subs.append(d)
            else:
                return Derivation(g, rule, tuple(subs))
        failed[g] = max(failed.get(g, 0), h)
        return None

    root_nf = frozenset({normal_form(goal)})
    try:
        for h in range(1, depth + 1):
            d = search(goal, h, root_nf, frozenset({goal}), 0)
            if d is not None:
                return ProofResult("found", d, count[0])
    except _Budget:
        return ProofResult("budget", None, count[0])
    return ProofResult("not-found", None, count[0])


def _size(s) -> int:
    if isinstance(s, (Comma, Arrow)):
        return 1 + _size(s.left) + _size(s.right)
    if isinstance(s, (Sharp, Flat)):
        return 1 + _size(s.inner)
    return 1


def _formulas_in(s):
    if isinstance(s, Form):
        yield s.f
    elif isinstance(s, (Comma, Arrow)):
        yield from _formulas_in(s.left)
        yield from _formulas_in(s.right)
    elif isinstance(s, (Sharp, Flat)):
        yield from _formulas_in(s.inner)


# -- soundness -----------------------------------------------------------------

@dataclass
class SoundnessReport:
    passed: bool = True
    checked: int = 0
    violations: list = field(default_factory=list)  # (sequent, model)


def soundness_check(sample: Sequence[Union[Derivation, Sequent]],
                    models: Iterable[KripkeModel], limit: int = 10) -> SoundnessReport:
    """Check that the interpreted root of each item holds on every model;
    collect up to ``limit`` violations."""
    roots = [x.root if isinstance(x, Derivation) else x for x in sample]
    pairs = [(s, interpret_structure(s.ante, "ante"), interpret_structure(s.succ, "succ"))
             for s in roots]
    rep = SoundnessReport()
    for m in models:
        for s, a, b in pairs:
            rep.checked += 1
            if extension_mask(m, a) & ~extension_mask(m, b):
                rep.passed = False
                if len(rep.violations) < limit:
                    rep.violations.append((s, m))
    return rep


# -- text formats ----------------------------------------------------------------

def structure_text(s: Structure) -> str:
    if isinstance(s, Unit):
        return "I"
    if isinstance(s, Form):
        return to_text(s.f)
    if isinstance(s, (Sharp, Flat)):
        sym = "#" if isinstance(s, Sharp) else "@"
        inner = structure_text(s.inner)
        if isinstance(s.inner, (Comma, Arrow)):
            inner = f"({inner})"
        return f"{sym} {inner}"
    left, right = structure_text(s.left), structure_text(s.right)
    if isinstance(s, Comma):
        if isinstance(s.left, Arrow):
            left = f"({left})"
        if isinstance(s.right, (Arrow, Comma)):
            right = f"({right})"
        return f"{left} , {right}"
    if isinstance(s.left, Arrow):
        left = f"({left})"
    return f"{left} >> {right}"


def sequent_text(s: Sequent) -> str:
    return f"{structure_text(s.ante)} |- {structure_text(s.succ)}"


class _StructureParser(FormulaParser):
    _STOP = (",", ">>", "|-", ")")

    def structure(self):
        left = self.comma()
        if self.accept(">>"):
            return Arrow(left, self.structure())
        return left

    def comma(self):
        s = self.unary()
        while self.accept(","):
            s = Comma(s, self.unary())
        return s

    def unary(self):
        t = self.tok
        if self.accept("#"):
            return Sharp(self.unary())
        if self.accept("@"):
            return Flat(self.unary())
        if t.kind == "id" and t.value == "I":
            self.i += 1
            return Unit()
        if t.kind == "sym" and t.value == "(":
            save = self.i
            try:
                f = self.formula()
                if self.tok.kind == "eof" or (self.tok.kind == "sym" and self.tok.value in self._STOP):
                    return Form(f)
            except ParseError:
                pass
            self.i = save + 1
            s = self.structure()
            if not self.accept(")"):
                raise self.error([")", ",", ">>"])
            return s
        return Form(self.formula())


def parse_structure(text: str) -> Structure:
    p = _StructureParser(tokenize(text, structural=True), text)
    if p.tok.kind == "eof":
        raise ParseError("empty input", 0, ("structure",), text)
    s = p.structure()
    if p.tok.kind != "eof":
        raise p.error(["end of input", ",", ">>"])
    return s


def parse_sequent(text: str) -> Sequent:
    """Parse ``X |- Y``."""
    p = _StructureParser(tokenize(text, structural=True), text)
    if p.tok.kind == "eof":
        raise ParseError("empty input", 0, ("structure",), text)
    ante = p.structure()
    if not p.accept("|-"):
        raise p.error(["|-", ",", ">>"])
    succ = p.structure()
    if p.tok.kind != "eof":
        raise p.error(["end of input", ",", ">>"])
    return Sequent(ante, succ)


def derivation_text(d: Derivation, indent: int = 0) -> str:
    """Indented tree, one ``rule-id: sequent`` per line, premises two spaces deeper."""
    lines = []
    stack = [(d, indent)]
    while stack:
        node, k = stack.pop()
        lines.append(f"{'  ' * k}{node.rule}: {sequent_text(node.root)}")
        for p in reversed(node.premises):
            stack.append((p, k + 1))
    return "\n".join(lines) + "\n"


def parse_derivation(text: str) -> Derivation:
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        stripped = line.lstrip(" ")
        level, rem = divmod(len(line) - len(stripped), 2)
        if rem:
            raise ValueError(f"bad indentation: {line!r}")
        rule, sep, seq = stripped.partition(": ")
        if not sep:
            raise ValueError(f"expected 'rule: sequent' in {line!r}")
        rows.append((level, rule, parse_sequent(seq)))
    if not rows or rows[0][0] != 0:
        raise ValueError("derivation text must start at indentation 0")

    pos = 0

    def build(level):
        nonlocal pos
        lv, rule, seq = rows[pos]
        pos += 1
        prems = []
        while pos < len(rows) and rows[pos][0] == level + 1:
            prems.append(build(level + 1))
        return Derivation(seq, rule, tuple(prems))

    d = build(0)
    if pos != len(rows):
        raise ValueError("trailing lines after the derivation root")
    return d
