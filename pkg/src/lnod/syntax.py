"""Formulas of the split-negation tense logic: AST, parser, printer.

ASCII surface syntax (Unicode equivalents in brackets)::

    atoms      p, q1, foo_bar
    constants  T [⊤]   F [⊥]
    unary      b> [▶]  b< [◀]  w> [▷]  w< [◁]   ~A  (sugar for A -> F)
    binary     &  [∧]  |  [∨]  -< [−<]  -> [→]

Precedence from tightest: unary, ``&``, ``|``, ``-<``, ``->``.  ``->`` is
right-associative; ``&``, ``|`` and ``-<`` associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Formula", "Atom", "Top", "Bot", "And", "Or", "Imp", "Excl",
    "BNegR", "BNegL", "WNegR", "WNegL",
    "ParseError", "parse", "to_text", "subformulas", "atoms", "size",
    "depth", "substitute", "neg",
]

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class ParseError(ValueError):
    """Syntax error with a character position and the expected token set."""

    def __init__(self, message: str, pos: int, expected=(), text: str = ""):
        self.pos = pos
        self.expected = tuple(sorted(set(expected)))
        self.text = text
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {pos}{exp}")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Excl:
    """Exclusion (co-implication) ``left -< right``."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class BNegR:
    """▶ : some ⌣-predecessor refutes the argument."""

    inner: "Formula"


@dataclass(frozen=True)
class BNegL:
    """◀ : every ⌢-successor refutes the argument."""

    inner: "Formula"


@dataclass(frozen=True)
class WNegR:
    """▷ : every ⌢-predecessor refutes the argument."""

    inner: "Formula"


@dataclass(frozen=True)
class WNegL:
    """◁ : some ⌣-successor refutes the argument."""

    inner: "Formula"


Formula = Union[Atom, Top, Bot, And, Or, Imp, Excl, BNegR, BNegL, WNegR, WNegL]

BINARY = (And, Or, Imp, Excl)
UNARY = (BNegR, BNegL, WNegR, WNegL)

UNARY_TOKEN = {BNegR: "b>", BNegL: "b<", WNegR: "w>", WNegL: "w<"}
BINARY_TOKEN = {And: "&", Or: "|", Excl: "-<", Imp: "->"}
PRECEDENCE = {Imp: 1, Excl: 2, Or: 3, And: 4}
RIGHT_ASSOC = {Imp}


def neg(f: Formula) -> Formula:
    """Heyting negation ``f -> F``."""
    return Imp(f, Bot())


def children(f: Formula) -> tuple:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY):
        return (f.inner,)
    return ()


# -- lexer -------------------------------------------------------------------

_UNICODE = {
    "⊤": "T", "⊥": "F", "▶": "b>", "◀": "b<", "▷": "w>", "◁": "w<",
    "∧": "&", "∨": "|", "→": "->", "−<": "-<", "¬": "~",
}
_SYMBOLS = ("|-", ">>", "->", "-<", "−<", "&", "|", "~", "(", ")", ",", "#", "@",
            "⊤", "⊥", "▶", "◀", "▷", "◁", "∧", "∨", "→", "¬")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "sym" or "eof"
    value: str
    pos: int


def tokenize(text: str, structural: bool = False) -> list[Token]:
    """Split ``text`` into tokens.

    With ``structural`` the structure-level symbols ``|-``, ``>>``, ``,``,
    ``#``, ``@`` are produced; otherwise they are lexing errors.
    """
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = _WORD_RE.match(text, i)
        if m:
            word = m.group()
            if word in ("b", "w") and i + 1 < n and text[i + 1] in "<>" \
                    and not text.startswith(">>", i + 1):
                toks.append(Token("sym", word + text[i + 1], i))
                i += 2
                continue
            toks.append(Token("id", word, i))
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                if sym in ("|-", ">>", ",", "#", "@") and not structural:
                    if sym == "|-":
                        # "|-" inside a formula is "|" followed by a stray "-"
                        toks.append(Token("sym", "|", i))
                        i += 1
                        break
                    raise ParseError(f"unexpected character {c!r}", i, text=text)
                value = _UNICODE.get(sym, sym)
                toks.append(Token("id" if value in ("T", "F") else "sym", value, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i, text=text)
    toks.append(Token("eof", "", n))
    return toks


# -- parser ------------------------------------------------------------------

_UNARY_SYM = {"b>": BNegR, "b<": BNegL, "w>": WNegR, "w<": WNegL}
_PRIMARY_START = ("T", "F", "b>", "b<", "w>", "w<", "~", "(", "atom")


class FormulaParser:
    """Recursive-descent parser over a token list; reused by the structure parser."""

    def __init__(self, tokens: list[Token], text: str):
        self.toks = tokens
        self.text = text
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.value)
        return ParseError(f"unexpected {what}", t.pos, expected, self.text)

    def accept(self, value: str) -> bool:
        if self.tok.kind == "sym" and self.tok.value == value:
            self.i += 1
            return True
        return False

    def formula(self) -> Formula:
        return self._imp()

    def _imp(self) -> Formula:
        left = self._excl()
        if self.accept("->"):
            return Imp(left, self._imp())
        return left

    def _excl(self) -> Formula:
        f = self._or()
        while self.accept("-<"):
            f = Excl(f, self._or())
        return f

    def _or(self) -> Formula:
        f = self._and()
        while self.accept("|"):
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while self.accept("&"):
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        t = self.tok
        if t.kind == "sym" and t.value in _UNARY_SYM:
            self.i += 1
            return _UNARY_SYM[t.value](self._unary())
        if self.accept("~"):
            return neg(self._unary())
        if self.accept("("):
            f = self.formula()
            if not self.accept(")"):
                raise self.error([")", "&", "|", "-<", "->"])
            return f
        if t.kind == "id":
            self.i += 1
            if t.value == "T":
                return Top()
            if t.value == "F":
                return Bot()
            if ATOM_RE.match(t.value):
                return Atom(t.value)
            raise ParseError(f"invalid atom name {t.value!r}", t.pos, _PRIMARY_START, self.text)
        raise self.error(_PRIMARY_START)


def parse(text: str) -> Formula:
    """Parse a formula; raise :class:`ParseError` on malformed or empty input."""
    toks = tokenize(text)
    p = FormulaParser(toks, text)
    if p.tok.kind == "eof":
        raise ParseError("empty input", 0, _PRIMARY_START, text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(["end of input", "&", "|", "-<", "->"])
    return f


# -- printer -----------------------------------------------------------------

def to_text(f: Formula) -> str:
    """Canonical ASCII rendering with minimal parentheses."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, UNARY):
        inner = to_text(f.inner)
        if isinstance(f.inner, BINARY):
            inner = f"({inner})"
        return f"{UNARY_TOKEN[type(f)]} {inner}"
    op = type(f)
    prec = PRECEDENCE[op]
    left, right = to_text(f.left), to_text(f.right)
    if isinstance(f.left, BINARY):
        lp = PRECEDENCE[type(f.left)]
        if lp < prec or (lp == prec and op in RIGHT_ASSOC):
            left = f"({left})"
    if isinstance(f.right, BINARY):
        rp = PRECEDENCE[type(f.right)]
        if rp < prec or (rp == prec and op not in RIGHT_ASSOC):
            right = f"({right})"
    return f"{left} {BINARY_TOKEN[op]} {right}"


# -- traversal ---------------------------------------------------------------

def _postorder(f: Formula) -> Iterator[Formula]:
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, every child listed before its parent."""
    seen: dict[Formula, None] = {}
    for node in _postorder(f):
        seen.setdefault(node, None)
    return list(seen)


def atoms(f: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    return [g.name for g in subformulas(f) if isinstance(g, Atom)]


def size(f: Formula) -> int:
    return sum(1 for _ in _postorder(f))


def depth(f: Formula) -> int:
    cs = children(f)
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace atoms by formulas according to ``mapping`` (name -> Formula)."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, UNARY):
        return type(f)(substitute(f.inner, mapping))
    return f
