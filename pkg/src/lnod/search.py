"""Exhaustive enumeration of small models up to isomorphism, countermodel
search and the double-negation probe.

A frame on ``n`` worlds is encoded as the triple ``(leq, frown, smile)`` of
relation codes; a relation code reads the ``n*n`` adjacency bits row by row
with pair ``(0, 0)`` as the most significant bit, so integer order is
lexicographic order of the bit string.  A valuation is encoded as one code per
atom (world 0 most significant).  A model is yielded iff its full encoding
is minimal over all world permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .kripke import KripkeModel, extension_mask, model_to_json, model_from_json
from .schemes import NegationScheme, SCHEMES
from .syntax import Atom, Formula, parse, to_text

__all__ = [
    "SearchConfig", "SearchStats", "CounterexampleReport", "Exhausted", "DNEReport",
    "SearchBudgetExceeded", "enumerate_models", "enumerate_frames",
    "find_countermodel", "validity_scan", "probe_dne", "dne_witnesses",
    "preorder_codes", "relation_code", "relation_pairs", "permute_code",
    "report_to_json", "report_from_json", "to_dot",
]

RELATIONS = ("frown", "smile")


class SearchBudgetExceeded(RuntimeError):
    """The model cap was hit before the enumeration was exhausted."""

    def __init__(self, stats: "SearchStats"):
        self.stats = stats
        super().__init__(f"model budget exceeded after {stats.models} models")


@dataclass
class SearchConfig:
    max_worlds: int = 2
    atoms: Sequence[str] = ("p",)
    require_strict: bool = True
    negation_scheme: NegationScheme = SCHEMES["heyting"]
    max_models: int | None = None
    min_worlds: int = 1
    # relations left out are fixed to the empty relation
    free_relations: Sequence[str] = RELATIONS

    def __post_init__(self):
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if not 1 <= self.min_worlds <= self.max_worlds:
            raise ValueError("min_worlds must lie in 1..max_worlds")
        if isinstance(self.negation_scheme, str):
            self.negation_scheme = SCHEMES[self.negation_scheme]
        for r in self.free_relations:
            if r not in RELATIONS:
                raise ValueError(f"unknown relation {r!r}")
        self.atoms = tuple(self.atoms)


@dataclass
class SearchStats:
    frames: int = 0
    models: int = 0
    work: int = 0  # formula evaluations

    def as_dict(self):
        return {"frames": self.frames, "models": self.models, "work": self.work}


@dataclass
class CounterexampleReport:
    model: KripkeModel
    formula: Formula
    world: int
    index: int  # position of the model in the enumeration stream
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass
class Exhausted:
    """No countermodel within the bound.  Not a validity proof."""

    stats: SearchStats = field(default_factory=SearchStats)


# -- relation codes ------------------------------------------------------------

def relation_code(n: int, pairs) -> int:
    code = 0
    top = n * n - 1
    for i, j in pairs:
        code |= 1 << (top - (i * n + j))
    return code


def relation_pairs(n: int, code: int) -> list[tuple[int, int]]:
    top = n * n - 1
    return [(k // n, k % n) for k in range(n * n) if code >> (top - k) & 1]


@lru_cache(maxsize=None)
def _perms(n: int) -> tuple:
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def _pair_images(n: int, pi: tuple) -> tuple:
    """For each code bit position, the bit position of its image under ``pi``."""
    top = n * n - 1
    out = []
    for k in range(n * n):
        i, j = divmod(top - k, n)
        out.append(top - (pi[i] * n + pi[j]))
    return tuple(out)


def _permute_raw(n, code, pi):
    img = _pair_images(n, pi)
    out = 0
    k = 0
    while code:
        if code & 1:
            out |= 1 << img[k]
        code >>= 1
        k += 1
    return out


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple:
    return tuple(tuple(_permute_raw(n, c, pi) for c in range(1 << (n * n))) for pi in _perms(n))


def permute_code(n: int, code: int, pi: tuple) -> int:
    """Code of the relation ``{(pi[i], pi[j]) : (i, j) in rel}``."""
    return _permute_raw(n, code, pi)


def _permuter(n):
    if n <= 3:
        tables = dict(zip(_perms(n), _perm_tables(n)))
        return lambda code, pi: tables[pi][code]
    cache: dict = {}

    def apply(code, pi):
        key = (code, pi)
        r = cache.get(key)
        if r is None:
            r = cache[key] = _permute_raw(n, code, pi)
        return r
    return apply


@lru_cache(maxsize=None)
def preorder_codes(n: int) -> tuple:
    """All reflexive-transitive relations on ``n`` worlds, ascending by code."""
    diag = relation_code(n, [(i, i) for i in range(n)])
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in itertools.product((0, 1), repeat=len(off)):
        succ = [1 << i for i in range(n)]
        for (i, j), b in zip(off, bits):
            if b:
                succ[i] |= 1 << j
        if all(succ[j] & ~succ[i] == 0 for i in range(n) for j in range(n)
               if succ[i] >> j & 1):
            out.append(diag | relation_code(n, [p for p, b in zip(off, bits) if b]))
    return tuple(sorted(out))


def _masks(n, code, pred=False):
    out = [0] * n
    for i, j in relation_pairs(n, code):
        if pred:
            out[j] |= 1 << i
        else:
            out[i] |= 1 << j
    return out


def _allowed_relations(n: int, leq: int, which: str) -> list[int]:
    """Codes of ``which`` relations meeting their two frame conditions over ``leq``."""
    up = _masks(n, leq)
    down = _masks(n, leq, pred=True)
    pairs = [(w, w2) for w in range(n) for w2 in range(n) if up[w] >> w2 & 1 and w != w2]
    out = []
    for code in range(1 << (n * n)):
        succ = _masks(n, code)
        pred = _masks(n, code, pred=True)
        ok = True
        for w, w2 in pairs:
            if which == "smile":
                # FC-b> and FC-w<
                if any(not pred[w2] & down[v] for v in range(n) if pred[w] >> v & 1) or \
                        any(not succ[w2] & down[v] for v in range(n) if succ[w] >> v & 1):
                    ok = False
                    break
            else:
                # FC-w> and FC-b<
                if any(not pred[w] & up[v2] for v2 in range(n) if pred[w2] >> v2 & 1) or \
                        any(not succ[w] & up[v2] for v2 in range(n) if succ[w2] >> v2 & 1):
                    ok = False
                    break
        if ok:
            out.append(code)
    return out


def _canonical_frames(n: int, strict: bool, free: Sequence[str]):
    """Yield ``(leq, frown, smile, automorphisms)`` for canonical frames, ascending."""
    perms = _perms(n)
    pc = _permuter(n)
    everything = range(1 << (n * n))
    for L in preorder_codes(n):
        GL = []
        for pi in perms:
            c = pc(L, pi)
            if c < L:
                break
            if c == L:
                GL.append(pi)
        else:
            if "frown" not in free:
                frowns = [0]
            else:
                frowns = _allowed_relations(n, L, "frown") if strict else everything
            if "smile" not in free:
                smiles = [0]
            else:
                smiles = _allowed_relations(n, L, "smile") if strict else everything
            for F in frowns:
                GLF = []
                for pi in GL:
                    c = pc(F, pi)
                    if c < F:
                        break
                    if c == F:
                        GLF.append(pi)
                else:
                    for S in smiles:
                        if len(GLF) == 1:
                            yield L, F, S, GLF
                            continue
                        G = []
                        for pi in GLF:
                            c = pc(S, pi)
                            if c < S:
                                break
                            if c == S:
                                G.append(pi)
                        else:
                            yield L, F, S, G


def _up_sets(n: int, leq: int) -> list[int]:
    up = _masks(n, leq)
    return [m for m in range(1 << n) if all(up[w] & ~m == 0 for w in range(n) if m >> w & 1)]


def _val_code(n, mask):
    return sum(1 << (n - 1 - i) for i in range(n) if mask >> i & 1)


def _permute_mask(mask, pi):
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << pi[i]
        mask >>= 1
        i += 1
    return out


def _build(n, L, F, S, atoms, masks, strict) -> KripkeModel:
    return KripkeModel(
        n=n,
        leq=frozenset(relation_pairs(n, L)),
        frown=frozenset(relation_pairs(n, F)),
        smile=frozenset(relation_pairs(n, S)),
        valuation=tuple(sorted(zip(atoms, masks))),
        strict=strict,
    )


def enumerate_frames(n: int, strict: bool = True, free_relations=RELATIONS) -> Iterator[tuple]:
    """Canonical frame codes ``(leq, frown, smile)`` on exactly ``n`` worlds."""
    for L, F, S, _ in _canonical_frames(n, strict, free_relations):
        yield L, F, S


def _model_stream(cfg: SearchConfig, stats: SearchStats):
    atoms = cfg.atoms
    for n in range(cfg.min_worlds, cfg.max_worlds + 1):
        for L, F, S, G in _canonical_frames(n, cfg.require_strict, cfg.free_relations):
            stats.frames += 1
            ups = sorted(_up_sets(n, L), key=lambda m: _val_code(n, m))
            nontrivial = G[1:]  # G[0] is always the identity
            for masks in itertools.product(ups, repeat=len(atoms)):
                if nontrivial:
                    codes = [_val_code(n, m) for m in masks]
                    if any([_val_code(n, _permute_mask(m, pi)) for m in masks] < codes
                           for pi in nontrivial):
                        continue
                yield _build(n, L, F, S, atoms, masks, cfg.require_strict)


def enumerate_models(cfg: SearchConfig, stats: SearchStats | None = None) -> Iterator[KripkeModel]:
    """One model per isomorphism class, in encoding order.

    Raises :class:`SearchBudgetExceeded` when ``cfg.max_models`` models have
    been produced and the stream is not exhausted.
    """
    stats = stats if stats is not None else SearchStats()
    for m in _model_stream(cfg, stats):
        if cfg.max_models is not None and stats.models >= cfg.max_models:
            raise SearchBudgetExceeded(stats)
        stats.models += 1
        yield m


# -- countermodels -------------------------------------------------------------

def _first_failure(m: KripkeModel, mask: int) -> int:
    missing = m.full & ~mask
    return (missing & -missing).bit_length() - 1


def find_countermodel(f: Formula, cfg: SearchConfig):
    """First enumerated model and world refuting ``f``, or :class:`Exhausted`.

    Raises :class:`SearchBudgetExceeded` on truncation.
    """
    stats = SearchStats()
    for m in enumerate_models(cfg, stats):
        stats.work += 1
        mask = extension_mask(m, f)
        if mask != m.full:
            return CounterexampleReport(m, f, _first_failure(m, mask), stats.models - 1, stats)
    return Exhausted(stats)


def validity_scan(fs: Sequence[Formula], cfg: SearchConfig) -> list:
    """Per formula, a :class:`CounterexampleReport` or :class:`Exhausted`,
    sharing one pass over the enumeration."""
    stats = SearchStats()
    results: list = [None] * len(fs)
    if not fs:
        return []
    pending = set(range(len(fs)))
    for m in enumerate_models(cfg, stats):
        for i in sorted(pending):
            stats.work += 1
            mask = extension_mask(m, fs[i])
            if mask != m.full:
                results[i] = CounterexampleReport(m, fs[i], _first_failure(m, mask),
                                                  stats.models - 1, SearchStats(**stats.as_dict()))
                pending.discard(i)
        if not pending:
            break
    for i in pending:
        results[i] = Exhausted(SearchStats(**stats.as_dict()))
    return results


# -- double-negation probe -----------------------------------------------------

@dataclass
class DNEReport:
    scheme: NegationScheme
    model: KripkeModel | None
    atom: str | None
    atom_ext: int | None
    negated_ext: int | None
    p_in_np: bool | None      # p ⊆ N(p)
    np_in_p: bool | None      # N(p) ⊆ p
    fixed: list = field(default_factory=list)      # up-set masks with N(A) = A
    non_fixed: list = field(default_factory=list)
    index: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.model is not None


def dne_witnesses(cfg: SearchConfig, stats: SearchStats | None = None):
    """Every ``(index, model, atom, ext_p, ext_np)`` with N(p) differing from p."""
    if not cfg.require_strict:
        raise ValueError("the double-negation probe needs require_strict=True")
    stats = stats if stats is not None else SearchStats()
    scheme = cfg.negation_scheme
    probes = [(a, Atom(a), scheme.apply(Atom(a))) for a in cfg.atoms]
    for m in enumerate_models(cfg, stats):
        for name, pa, npa in probes:
            stats.work += 1
            e_p = extension_mask(m, pa)
            e_np = extension_mask(m, npa)
            if e_p != e_np:
                yield stats.models - 1, m, name, e_p, e_np


def probe_dne(cfg: SearchConfig) -> DNEReport:
    """Search for a model where the scheme's double negation of an atom differs
    from the atom; report both extensions, the failing inclusion(s) and the
    witness algebra's fixed fragment."""
    from .algebra import build_complex_algebra, fixed_modes

    stats = SearchStats()
    scheme = cfg.negation_scheme
    for index, m, atom, e_p, e_np in dne_witnesses(cfg, stats):
        alg = build_complex_algebra(m, cap=max(6, m.n))
        fixed = fixed_modes(alg, scheme)
        return DNEReport(scheme, m, atom, e_p, e_np,
                         p_in_np=e_p & ~e_np == 0, np_in_p=e_np & ~e_p == 0,
                         fixed=sorted(fixed), non_fixed=[e for e in alg.elements if e not in fixed],
                         index=index, stats=stats)
    return DNEReport(scheme, None, None, None, None, None, None, stats=stats)


# -- serialisation -------------------------------------------------------------

def _worlds(m, mask):
    return [m.name(w) for w in range(m.n) if mask >> w & 1]


def report_to_json(rep) -> dict:
    """Model JSON plus a ``witness`` block (or ``{"exhausted": ...}``)."""
    if isinstance(rep, Exhausted):
        return {"exhausted": True, "stats": rep.stats.as_dict()}
    if isinstance(rep, CounterexampleReport):
        out = model_to_json(rep.model)
        out["witness"] = {
            "formula": to_text(rep.formula),
            "world": rep.model.name(rep.world),
            "index": rep.index,
            "stats": rep.stats.as_dict(),
        }
        return out
    if isinstance(rep, DNEReport):
        if not rep.found:
            return {"exhausted": True, "scheme": rep.scheme.name, "stats": rep.stats.as_dict()}
        m = rep.model
        out = model_to_json(m)
        out["witness"] = {
            "scheme": rep.scheme.name,
            "template": to_text(rep.scheme.template),
            "atom": rep.atom,
            "atom_extension": _worlds(m, rep.atom_ext),
            "negated_extension": _worlds(m, rep.negated_ext),
            "atom_in_negated": rep.p_in_np,
            "negated_in_atom": rep.np_in_p,
            "fixed": [_worlds(m, e) for e in rep.fixed],
            "non_fixed": [_worlds(m, e) for e in rep.non_fixed],
            "index": rep.index,
            "stats": rep.stats.as_dict(),
        }
        return out
    raise TypeError(f"cannot serialise {type(rep).__name__}")


def report_from_json(data: dict) -> CounterexampleReport | Exhausted:
    """Inverse of :func:`report_to_json` for countermodel reports."""
    if data.get("exhausted"):
        return Exhausted(SearchStats(**data.get("stats", {})))
    w = data["witness"]
    m = model_from_json({k: v for k, v in data.items() if k != "witness"})
    return CounterexampleReport(m, parse(w["formula"]), m.world_index(w["world"]),
                                w.get("index", 0), SearchStats(**w.get("stats", {})))


def to_dot(m: KripkeModel, name: str = "model") -> str:
    """DOT digraph: solid edges for the covering pairs of ≤, dashed ⌢, dotted ⌣."""
    lines = [f"digraph {name} {{"]
    for w in range(m.n):
        true = [a for a, mask in m.valuation if mask >> w & 1]
        label = m.name(w) + ("\\n" + ", ".join(true) if true else "")
        lines.append(f'  {m.name(w)} [label="{label}"];')
    strict_lt = {(a, b) for a, b in m.leq if a != b and (b, a) not in m.leq}
    for a, b in sorted(m.leq):
        if a == b:
            continue
        if (a, b) in strict_lt and any((a, c) in strict_lt and (c, b) in strict_lt
                                       for c in range(m.n)):
            continue
        lines.append(f"  {m.name(a)} -> {m.name(b)};")
    for a, b in sorted(m.frown):
        lines.append(f"  {m.name(a)} -> {m.name(b)} [style=dashed];")
    for a, b in sorted(m.smile):
        lines.append(f"  {m.name(a)} -> {m.name(b)} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def random_model(rng, n: int, atoms=("p", "q"), strict: bool = True,
                 density: float = 0.3) -> KripkeModel:
    """A random model on ``n`` worlds drawn with ``rng`` (a ``random.Random``).

    For strict models ``⌢`` is closed downward and ``⌣`` upward in both
    arguments along ``≤``, which makes every frame condition hold.
    """
    from .kripke import make_model

    def rand_rel():
        return [(i, j) for i in range(n) for j in range(n) if rng.random() < density]

    m = make_model(n, rand_rel())
    leq = m.leq
    frown, smile = rand_rel(), rand_rel()
    if strict:
        frown = {(a, b) for (x, y) in frown for a in range(n) for b in range(n)
                 if (a, x) in leq and (b, y) in leq}
        smile = {(a, b) for (x, y) in smile for a in range(n) for b in range(n)
                 if (x, a) in leq and (y, b) in leq}
    ups = [s for s in range(1 << n) if all(m.up[w] & ~s == 0 for w in range(n) if s >> w & 1)]
    val = {a: rng.choice(ups) for a in atoms}
    return make_model(n, sorted(leq), sorted(frown), sorted(smile), val, strict=strict)
