"""Finite Kripke models ⟨W, ≤, ⌢, ⌣, I⟩ and the satisfaction relation.

Worlds are the indices ``0..n-1``; sets of worlds are bitmasks (world ``i``
is bit ``1 << i``).  ``≤`` is the intuitionistic heredity order, ``⌢`` and
``⌣`` are the two tense relations read by the split negations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .syntax import (Atom, Top, Bot, And, Or, Imp, Excl, BNegR, BNegL, WNegR, WNegL,
                     Formula, subformulas)

__all__ = [
    "ModelError", "WorldSet", "KripkeModel", "Violation", "make_model",
    "check_frame_conditions", "is_strict", "extension", "extension_mask",
    "satisfies", "valid_on_model", "persistent", "is_up_closed",
    "model_from_json", "model_to_json", "load_model", "dump_model",
]


class ModelError(ValueError):
    """Malformed model description (bad world, non-persistent valuation, ...)."""


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class WorldSet:
    """A set of worlds of a fixed model, backed by a bitmask."""

    mask: int
    n: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#b} has worlds outside 0..{self.n - 1}")

    @classmethod
    def of(cls, worlds: Iterable[int], n: int) -> "WorldSet":
        mask = 0
        for w in worlds:
            if not 0 <= w < n:
                raise ValueError(f"world {w} outside 0..{n - 1}")
            mask |= 1 << w
        return cls(mask, n)

    def _same(self, other: "WorldSet"):
        if not isinstance(other, WorldSet) or other.n != self.n:
            raise TypeError("world sets over different models")

    def __or__(self, other):
        self._same(other)
        return WorldSet(self.mask | other.mask, self.n)

    def __and__(self, other):
        self._same(other)
        return WorldSet(self.mask & other.mask, self.n)

    def __sub__(self, other):
        self._same(other)
        return WorldSet(self.mask & ~other.mask, self.n)

    def __invert__(self):
        return WorldSet(~self.mask & ((1 << self.n) - 1), self.n)

    def __le__(self, other):
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __contains__(self, w: int) -> bool:
        return 0 <= w < self.n and bool(self.mask >> w & 1)

    def __iter__(self):
        return _bits(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def __repr__(self):
        return "{" + ", ".join(map(str, self)) + "}"


def _closure(n: int, pairs: Iterable[tuple[int, int]]) -> frozenset:
    """Reflexive-transitive closure (Warshall) of a relation on ``range(n)``."""
    reach = [1 << i for i in range(n)]
    for a, b in pairs:
        reach[a] |= 1 << b
    for k in range(n):
        for i in range(n):
            if reach[i] >> k & 1:
                reach[i] |= reach[k]
    return frozenset((i, j) for i in range(n) for j in _bits(reach[i]))


def _succ_masks(n, rel):
    out = [0] * n
    for a, b in rel:
        out[a] |= 1 << b
    return tuple(out)


def _pred_masks(n, rel):
    out = [0] * n
    for a, b in rel:
        out[b] |= 1 << a
    return tuple(out)


@dataclass(frozen=True)
class KripkeModel:
    """Immutable finite model.  Build through :func:`make_model` to get ``≤``
    closed and the valuation validated."""

    n: int
    leq: frozenset
    frown: frozenset
    smile: frozenset
    valuation: tuple  # sorted ((atom, mask), ...)
    names: tuple = ()
    strict: bool = False
    closure_added: frozenset = field(default=frozenset(), compare=False)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def worlds(self) -> range:
        return range(self.n)

    @cached_property
    def val(self) -> dict:
        return dict(self.valuation)

    @cached_property
    def up(self) -> tuple:
        return _succ_masks(self.n, self.leq)

    @cached_property
    def down(self) -> tuple:
        return _pred_masks(self.n, self.leq)

    @cached_property
    def frown_succ(self) -> tuple:
        return _succ_masks(self.n, self.frown)

    @cached_property
    def frown_pred(self) -> tuple:
        return _pred_masks(self.n, self.frown)

    @cached_property
    def smile_succ(self) -> tuple:
        return _succ_masks(self.n, self.smile)

    @cached_property
    def smile_pred(self) -> tuple:
        return _pred_masks(self.n, self.smile)

    def name(self, w: int) -> str:
        return self.names[w] if self.names else f"w{w}"

    def world_index(self, name) -> int:
        if isinstance(name, int):
            if 0 <= name < self.n:
                return name
        else:
            names = self.names or tuple(f"w{i}" for i in range(self.n))
            if name in names:
                return names.index(name)
            if str(name).isdigit() and int(name) < self.n:
                return int(name)
        raise ModelError(f"unknown world {name!r}")

    def worldset(self, mask: int) -> WorldSet:
        return WorldSet(mask, self.n)


def _check_pairs(n, pairs, what):
    out = set()
    for pair in pairs:
        a, b = pair
        if not (0 <= a < n and 0 <= b < n):
            raise ModelError(f"{what} pair {pair!r} mentions a world outside 0..{n - 1}")
        out.add((a, b))
    return frozenset(out)


def make_model(n: int, leq=(), frown=(), smile=(), val: Mapping | None = None,
               names=None, strict: bool = False, validate: bool = True) -> KripkeModel:
    """Build a model; ``leq`` pairs are generators and get closed.

    ``val`` maps atom names to world collections or bitmasks.  With
    ``strict`` and ``validate`` the frame conditions are enforced.
    """
    if n < 1:
        raise ModelError("a model needs at least one world")
    given = _check_pairs(n, leq, "leq")
    closed = _closure(n, given)
    added = closed - given - {(i, i) for i in range(n)}
    valuation = []
    for atom, worlds in (val or {}).items():
        mask = worlds if isinstance(worlds, int) else WorldSet.of(worlds, n).mask
        if mask >> n:
            raise ModelError(f"valuation of {atom!r} mentions worlds outside the model")
        valuation.append((atom, mask))
    m = KripkeModel(
        n=n, leq=closed, frown=_check_pairs(n, frown, "frown"),
        smile=_check_pairs(n, smile, "smile"), valuation=tuple(sorted(valuation)),
        names=tuple(names) if names else (), strict=strict, closure_added=frozenset(added),
    )
    for atom, mask in m.valuation:
        if not is_up_closed(m, mask):
            raise ModelError(f"valuation of {atom!r} is not up-closed under leq")
    if strict and validate:
        bad = check_frame_conditions(m)
        if bad:
            raise ModelError(f"model flagged strict violates {bad[0]}")
    return m


# -- frame conditions ----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str  # "preorder", "FC-b>", "FC-w>", "FC-b<", "FC-w<"
    worlds: tuple

    def __str__(self):
        return f"{self.condition} at {self.worlds}"


def check_frame_conditions(m: KripkeModel) -> list[Violation]:
    """All violations of the preorder axioms and of FC-▶, FC-▷, FC-◀, FC-◁.

    Triples are ``(w, w', v)`` for FC-▶/FC-◁ and ``(w, w', v')`` for
    FC-▷/FC-◀, following the variable names of each condition.
    """
    out = []
    n = m.n
    for w in range(n):
        if (w, w) not in m.leq:
            out.append(Violation("preorder", (w, w, w)))
    for a, b in sorted(m.leq):
        for c in range(n):
            if (b, c) in m.leq and (a, c) not in m.leq:
                out.append(Violation("preorder", (a, b, c)))
    if out:
        return out
    up, down = m.up, m.down
    for w in range(n):
        for w2 in _bits(up[w]):
            # FC-b>: v ⌣ w  =>  some v' ⌣ w' with v' <= v
            for v in _bits(m.smile_pred[w]):
                if not m.smile_pred[w2] & down[v]:
                    out.append(Violation("FC-b>", (w, w2, v)))
            # FC-w>: v' ⌢ w'  =>  some v ⌢ w with v' <= v
            for v2 in _bits(m.frown_pred[w2]):
                if not m.frown_pred[w] & up[v2]:
                    out.append(Violation("FC-w>", (w, w2, v2)))
            # FC-b<: w' ⌢ v'  =>  some v with w ⌢ v and v' <= v
            for v2 in _bits(m.frown_succ[w2]):
                if not m.frown_succ[w] & up[v2]:
                    out.append(Violation("FC-b<", (w, w2, v2)))
            # FC-w<: w ⌣ v  =>  some v' with w' ⌣ v' and v' <= v
            for v in _bits(m.smile_succ[w]):
                if not m.smile_succ[w2] & down[v]:
                    out.append(Violation("FC-w<", (w, w2, v)))
    return out


def is_strict(m: KripkeModel) -> bool:
    return not check_frame_conditions(m)


def is_up_closed(m: KripkeModel, mask: int) -> bool:
    up = m.up
    return all(up[w] & ~mask == 0 for w in _bits(mask))


# -- evaluation ----------------------------------------------------------------

def _eval_node(m: KripkeModel, f, ext: dict) -> int:
    n = m.n
    full = m.full
    if isinstance(f, Atom):
        return m.val.get(f.name, 0)
    if isinstance(f, Top):
        return full
    if isinstance(f, Bot):
        return 0
    if isinstance(f, And):
        return ext[f.left] & ext[f.right]
    if isinstance(f, Or):
        return ext[f.left] | ext[f.right]
    if isinstance(f, Imp):
        bad = ext[f.left] & ~ext[f.right]
        return sum(1 << w for w in range(n) if not m.up[w] & bad)
    if isinstance(f, Excl):
        good = ext[f.left] & ~ext[f.right]
        return sum(1 << w for w in range(n) if m.down[w] & good)
    a = ext[f.inner]
    if isinstance(f, BNegR):
        return sum(1 << w for w in range(n) if m.smile_pred[w] & ~a)
    if isinstance(f, WNegR):
        return sum(1 << w for w in range(n) if not m.frown_pred[w] & a)
    if isinstance(f, BNegL):
        return sum(1 << w for w in range(n) if not m.frown_succ[w] & a)
    if isinstance(f, WNegL):
        return sum(1 << w for w in range(n) if m.smile_succ[w] & ~a)
    raise TypeError(f"not a formula: {f!r}")


def extension_mask(m: KripkeModel, f: Formula) -> int:
    ext: dict = {}
    for g in subformulas(f):
        ext[g] = _eval_node(m, g, ext)
    return ext[f]


def extension(m: KripkeModel, f: Formula) -> WorldSet:
    """The set of worlds satisfying ``f``; unvalued atoms are false everywhere."""
    return WorldSet(extension_mask(m, f), m.n)


def satisfies(m: KripkeModel, w, f: Formula) -> bool:
    return bool(extension_mask(m, f) >> m.world_index(w) & 1)


def valid_on_model(m: KripkeModel, f: Formula) -> bool:
    return extension_mask(m, f) == m.full


def persistent(m: KripkeModel, f: Formula) -> bool:
    return is_up_closed(m, extension_mask(m, f))


# -- JSON ----------------------------------------------------------------------

def model_from_json(data: Mapping, validate: bool = True) -> KripkeModel:
    """Read the ``{"worlds": [...], "leq": [...], ...}`` model format."""
    try:
        names = [str(w) for w in data["worlds"]]
    except (KeyError, TypeError):
        raise ModelError('model JSON needs a "worlds" list') from None
    if len(set(names)) != len(names):
        raise ModelError("duplicate world names")
    index = {w: i for i, w in enumerate(names)}

    def idx(w):
        try:
            return index[str(w)]
        except KeyError:
            raise ModelError(f"unknown world {w!r}") from None

    def rel(key):
        pairs = data.get(key, [])
        try:
            return [(idx(a), idx(b)) for a, b in pairs]
        except (TypeError, ValueError):
            raise ModelError(f'"{key}" must be a list of world pairs') from None

    val = {}
    for atom, ws in (data.get("val") or {}).items():
        if not isinstance(ws, list):
            raise ModelError(f"valuation of {atom!r} must be a list of worlds")
        val[atom] = [idx(w) for w in ws]
    return make_model(len(names), rel("leq"), rel("frown"), rel("smile"), val,
                      names=names, strict=bool(data.get("strict", False)),
                      validate=validate)


def model_to_json(m: KripkeModel) -> dict:
    nm = m.name
    return {
        "worlds": [nm(i) for i in range(m.n)],
        "leq": [[nm(a), nm(b)] for a, b in sorted(m.leq) if a != b],
        "frown": [[nm(a), nm(b)] for a, b in sorted(m.frown)],
        "smile": [[nm(a), nm(b)] for a, b in sorted(m.smile)],
        "val": {atom: [nm(w) for w in _bits(mask)] for atom, mask in m.valuation},
        "strict": m.strict,
    }


def load_model(path, validate: bool = True) -> KripkeModel:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"invalid JSON: {exc}") from None
    return model_from_json(data, validate=validate)


def dump_model(m: KripkeModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(m), fh, indent=2)
        fh.write("\n")
