"""Double-negation schemes: the candidate maps A ↦ N(A) probed for DNE failure."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (Atom, Bot, BNegL, BNegR, Formula, Imp, WNegL, WNegR, atoms,
                     parse, substitute, to_text)

HOLE = "a"


@dataclass(frozen=True)
class NegationScheme:
    """A one-hole formula template; ``apply`` plugs a formula into the hole."""

    name: str
    template: Formula
    hole: str = HOLE

    def __post_init__(self):
        extra = [x for x in atoms(self.template) if x != self.hole]
        if extra:
            raise ValueError(f"scheme template may only mention the hole {self.hole!r}, "
                             f"found {', '.join(extra)}")

    def apply(self, f: Formula) -> Formula:
        return substitute(self.template, {self.hole: f})

    def __str__(self):
        return f"{self.name}: {to_text(self.template)}"


_a = Atom(HOLE)

SCHEMES = {
    "heyting": NegationScheme("heyting", Imp(Imp(_a, Bot()), Bot())),
    "galois": NegationScheme("galois", WNegR(BNegL(_a))),
    "galois_flip": NegationScheme("galois_flip", BNegL(WNegR(_a))),
    "cogalois": NegationScheme("cogalois", BNegR(WNegL(_a))),
    "cogalois_flip": NegationScheme("cogalois_flip", WNegL(BNegR(_a))),
}


def get_scheme(name: str, template: str | None = None, hole: str = HOLE) -> NegationScheme:
    """Look up a built-in scheme, or build ``custom`` from a template formula."""
    if name == "custom":
        if template is None:
            raise ValueError("custom scheme needs a template formula")
        return NegationScheme("custom", parse(template), hole)
    try:
        return SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown negation scheme {name!r}; choose from "
                         f"{', '.join([*SCHEMES, 'custom'])}") from None
