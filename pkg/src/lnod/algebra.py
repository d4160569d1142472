"""Complex algebras of strict models: the up-sets of (W, ≤) with Heyting and
co-Heyting operations and the four lifted negations.

Implication and exclusion are computed lattice-theoretically (largest /
smallest element solving the residuation inequality), the negations
pointwise from the frame relations, so the algebra is an independent route to
the model checker's extensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .kripke import KripkeModel, check_frame_conditions
from .schemes import NegationScheme
from .syntax import (Atom, Top, Bot, And, Or, Imp, Excl, BNegR, BNegL, WNegR, WNegL,
                     Formula, subformulas)

__all__ = [
    "AlgebraError", "ComplexAlgebra", "LawReport", "OperatorReport", "DualizingReport",
    "build_complex_algebra", "check_laws", "check_comonad", "check_closure",
    "dualizing_report", "fixed_modes", "evaluate", "export_algebra",
    "COMONADS", "CLOSURES", "NEGATIONS", "LAW_GROUPS",
]

DEFAULT_CAP = 6

NEGATIONS = ("b>", "b<", "w>", "w<")
COMONADS = ("b>w<", "w<b>")   # ▶◁, ◁▶
CLOSURES = ("w>b<", "b<w>")   # ▷◀, ◀▷


class AlgebraError(ValueError):
    def __init__(self, message, violations=()):
        self.violations = list(violations)
        super().__init__(message)


def _members(mask, n):
    return [w for w in range(n) if mask >> w & 1]


@dataclass(frozen=True)
class ComplexAlgebra:
    model: KripkeModel
    elements: tuple  # up-set bitmasks, ascending

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.model.full

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return a & ~b == 0

    @staticmethod
    def meet(a: int, b: int) -> int:
        return a & b

    @staticmethod
    def join(a: int, b: int) -> int:
        return a | b

    def imp(self, a: int, b: int) -> int:
        # largest c with a ∧ c ≤ b
        out = 0
        for c in self.elements:
            if c & a & ~b == 0:
                out |= c
        return out

    def excl(self, a: int, b: int) -> int:
        # smallest c with a ≤ b ∨ c
        out = self.top
        for c in self.elements:
            if a & ~(b | c) == 0:
                out &= c
        return out

    def neg(self, op: str, a: int) -> int:
        m = self.model
        n = m.n
        if op == "b>":
            hit = {w for v, w in m.smile if not a >> v & 1}
            return sum(1 << w for w in hit)
        if op == "w<":
            hit = {w for w, v in m.smile if not a >> v & 1}
            return sum(1 << w for w in hit)
        if op == "w>":
            blocked = {w for v, w in m.frown if a >> v & 1}
            return sum(1 << w for w in range(n) if w not in blocked)
        if op == "b<":
            blocked = {w for w, v in m.frown if a >> v & 1}
            return sum(1 << w for w in range(n) if w not in blocked)
        raise ValueError(f"unknown negation {op!r}")

    @cached_property
    def neg_tables(self) -> dict:
        return {op: tuple(self.neg(op, e) for e in self.elements) for op in NEGATIONS}

    def negate(self, op: str, a: int) -> int:
        return self.neg_tables[op][self.index[a]]

    def compose(self, ops: str, a: int) -> int:
        """Apply a composite such as ``"b>w<"`` (outermost first)."""
        for op in reversed([ops[i:i + 2] for i in range(0, len(ops), 2)]):
            a = self.negate(op, a)
        return a

    @cached_property
    def imp_table(self) -> tuple:
        return tuple(tuple(self.imp(a, b) for b in self.elements) for a in self.elements)

    @cached_property
    def excl_table(self) -> tuple:
        return tuple(tuple(self.excl(a, b) for b in self.elements) for a in self.elements)


def _up_sets(m: KripkeModel) -> list[int]:
    up = m.up
    return [s for s in range(1 << m.n)
            if all(up[w] & ~s == 0 for w in range(m.n) if s >> w & 1)]


def build_complex_algebra(m: KripkeModel, cap: int = DEFAULT_CAP) -> ComplexAlgebra:
    """The algebra of all ≤-up-sets of a strict model.

    Raises :class:`AlgebraError` for non-strict models (carrying the
    violations) or when the model has more than ``cap`` worlds.
    """
    if m.n > cap:
        raise AlgebraError(f"model has {m.n} worlds, cap is {cap}")
    bad = check_frame_conditions(m)
    if bad:
        raise AlgebraError(f"model is not strict: {bad[0]}", bad)
    a = ComplexAlgebra(m, tuple(_up_sets(m)))
    elems = a.index
    for op, table in a.neg_tables.items():
        for e, r in zip(a.elements, table):
            if r not in elems:
                raise AlgebraError(f"{op} maps {e:#b} outside the up-sets")
    for row in a.imp_table + a.excl_table:
        for r in row:
            if r not in elems:
                raise AlgebraError("implication/exclusion left the up-sets")
    return a


def evaluate(a: ComplexAlgebra, f: Formula, env: dict) -> int:
    """Value of ``f`` with atoms interpreted by ``env`` (atom -> element)."""
    val: dict = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            r = env.get(g.name, 0)
        elif isinstance(g, Top):
            r = a.top
        elif isinstance(g, Bot):
            r = 0
        elif isinstance(g, And):
            r = val[g.left] & val[g.right]
        elif isinstance(g, Or):
            r = val[g.left] | val[g.right]
        elif isinstance(g, Imp):
            r = a.imp_table[a.index[val[g.left]]][a.index[val[g.right]]]
        elif isinstance(g, Excl):
            r = a.excl_table[a.index[val[g.left]]][a.index[val[g.right]]]
        else:
            op = {BNegR: "b>", BNegL: "b<", WNegR: "w>", WNegL: "w<"}[type(g)]
            r = a.negate(op, val[g.inner])
        val[g] = r
    return val[f]


# -- law checking --------------------------------------------------------------

@dataclass
class LawReport:
    passed: bool = True
    instances: dict = field(default_factory=dict)
    failure: tuple | None = None  # (law, element indices)

    def _check(self, law, ok, args, algebra):
        self.instances[law] = self.instances.get(law, 0) + 1
        if not ok and self.passed:
            self.passed = False
            self.failure = (law, tuple(algebra.index[x] for x in args))


LAW_GROUPS = ("lattice", "residuation", "antitone", "galois")


def check_laws(a: ComplexAlgebra, groups=LAW_GROUPS) -> LawReport:
    """Lattice, (co-)residuation, antitonicity, Galois and co-Galois laws,
    checked on every tuple of elements; ``groups`` restricts the families."""
    rep = LawReport()
    E = a.elements
    le = a.leq
    lattice, residuation = "lattice" in groups, "residuation" in groups
    antitone, galois = "antitone" in groups, "galois" in groups
    if galois or antitone:
        tables = {op: dict(zip(E, a.neg_tables[op])) for op in NEGATIONS}
        wr, bl, br, wl = tables["w>"], tables["b<"], tables["b>"], tables["w<"]
    for x, y in itertools.product(E, repeat=2):
        if lattice:
            rep._check("meet-comm", x & y == y & x, (x, y), a)
            rep._check("join-comm", x | y == y | x, (x, y), a)
            rep._check("absorption", (x & (x | y)) == x and (x | (x & y)) == x, (x, y), a)
        if antitone and le(x, y):
            for op in NEGATIONS:
                t = tables[op]
                rep._check(f"antitone-{op}", le(t[y], t[x]), (x, y), a)
        if galois:
            rep._check("galois", le(x, wr[y]) == le(y, bl[x]), (x, y), a)
            rep._check("co-galois", le(br[y], x) == le(wl[x], y), (x, y), a)
    if lattice:
        for x in E:
            rep._check("idempotence", (x & x) == x and (x | x) == x, (x,), a)
    if not (lattice or residuation):
        return rep
    ix = a.index
    for x, y, z in itertools.product(E, repeat=3):
        if lattice:
            rep._check("meet-assoc", (x & y) & z == x & (y & z), (x, y, z), a)
            rep._check("join-assoc", (x | y) | z == x | (y | z), (x, y, z), a)
        if residuation:
            rep._check("residuation",
                       le(x & y, z) == le(y, a.imp_table[ix[x]][ix[z]]), (x, y, z), a)
            rep._check("co-residuation",
                       le(x, y | z) == le(a.excl_table[ix[x]][ix[y]], z), (x, y, z), a)
    return rep


@dataclass
class OperatorReport:
    """Outcome of the interior (comonad) or closure checks for one composite."""

    composite: str
    kind: str             # "interior" or "closure"
    extensive: bool       # counit G(A) ≤ A, or unit A ≤ C(A)
    monotone: bool
    idempotent: bool
    fixed: list           # coalgebras / closed elements
    failure: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.extensive and self.monotone and self.idempotent


def _operator_report(a: ComplexAlgebra, composite: str, kind: str) -> OperatorReport:
    le = a.leq
    g = {x: a.compose(composite, x) for x in a.elements}
    failure = None
    ext = mono = idem = True
    for x in a.elements:
        ok = le(g[x], x) if kind == "interior" else le(x, g[x])
        if not ok:
            ext = False
            failure = failure or ("counit" if kind == "interior" else "unit", (a.index[x],))
        if g[g[x]] != g[x]:
            idem = False
            failure = failure or ("idempotence", (a.index[x],))
    for x, y in itertools.product(a.elements, repeat=2):
        if le(x, y) and not le(g[x], g[y]):
            mono = False
            failure = failure or ("monotonicity", (a.index[x], a.index[y]))
    fixed = [x for x in a.elements if g[x] == x]
    return OperatorReport(composite, kind, ext, mono, idem, fixed, failure)


def check_comonad(a: ComplexAlgebra, composite: str = "b>w<") -> OperatorReport:
    """Counit, monotonicity and idempotence of ▶◁ (``"b>w<"``) or ◁▶ (``"w<b>"``)."""
    if composite not in COMONADS:
        raise ValueError(f"composite must be one of {COMONADS}")
    return _operator_report(a, composite, "interior")


def check_closure(a: ComplexAlgebra, composite: str = "w>b<") -> OperatorReport:
    """Unit, monotonicity and idempotence of ▷◀ (``"w>b<"``) or ◀▷ (``"b<w>"``)."""
    if composite not in CLOSURES:
        raise ValueError(f"composite must be one of {CLOSURES}")
    return _operator_report(a, composite, "closure")


# -- dualizing elements --------------------------------------------------------

@dataclass
class DualizingReport:
    non_fixed: dict        # D -> [A with (A→D)→D ≠ A]
    fixed: dict            # D -> [A with (A→D)→D = A]
    has_dualizing_element: bool
    dualizing: list        # every D that works
    witnesses: dict        # D -> first non-fixed A, when D is not dualizing


def dualizing_report(a: ComplexAlgebra) -> DualizingReport:
    """For every candidate D, the elements A moved by A ↦ (A→D)→D."""
    ix = a.index
    imp = a.imp_table
    non_fixed, fixed, witnesses = {}, {}, {}
    for d in a.elements:
        moved, kept = [], []
        for x in a.elements:
            dd = imp[ix[imp[ix[x]][ix[d]]]][ix[d]]
            (kept if dd == x else moved).append(x)
        non_fixed[d], fixed[d] = moved, kept
        if moved:
            witnesses[d] = moved[0]
    dualizing = [d for d in a.elements if not non_fixed[d]]
    return DualizingReport(non_fixed, fixed, bool(dualizing), dualizing, witnesses)


def fixed_modes(a: ComplexAlgebra, scheme: NegationScheme) -> set:
    """Elements A with scheme(A) = A."""
    return {x for x in a.elements
            if evaluate(a, scheme.template, {scheme.hole: x}) == x}


def export_algebra(a: ComplexAlgebra) -> dict:
    m = a.model
    names = [m.name(w) for w in range(m.n)]

    def ws(mask):
        return [names[w] for w in _members(mask, m.n)]

    ix = a.index
    rep = dualizing_report(a)
    return {
        "worlds": names,
        "elements": [ws(e) for e in a.elements],
        "imp": [[ix[r] for r in row] for row in a.imp_table],
        "negations": {op: [ix[r] for r in a.neg_tables[op]] for op in NEGATIONS},
        "dualizing": {
            "has_dualizing_element": rep.has_dualizing_element,
            "dualizing": [ix[d] for d in rep.dualizing],
            "candidates": [
                {"D": ix[d], "non_fixed": [ix[x] for x in rep.non_fixed[d]],
                 "fixed": [ix[x] for x in rep.fixed[d]],
                 "witness": ix[rep.witnesses[d]] if d in rep.witnesses else None}
                for d in a.elements
            ],
        },
    }
