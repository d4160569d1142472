import pytest
from hypothesis import given, settings

from conftest import formulas
from lnod.syntax import (And, Atom, BNegL, BNegR, Bot, Excl, Imp, Or, ParseError, Top,
                         WNegL, WNegR, children, parse, size, subformulas, to_text)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p -> q", Imp(p, q)),
    ("b> p & q", And(BNegR(p), q)),
    ("~~p", Imp(Imp(p, Bot()), Bot())),
    ("T", Top()),
    ("⊥", Bot()),
    ("p -> q -> r", Imp(p, Imp(q, r))),
    ("p -< q -< r", Excl(Excl(p, q), r)),
    ("p & q | r", Or(And(p, q), r)),
    ("p | q -< r", Excl(Or(p, q), r)),
    ("p -< q -> r", Imp(Excl(p, q), r)),
    ("▶◀▷◁p", BNegR(BNegL(WNegR(WNegL(p))))),
    ("b<w>p", BNegL(WNegR(p))),
    ("p ∧ q → r ∨ p", Imp(And(p, q), Or(r, p))),
    ("p −< q", Excl(p, q)),
    ("T -< p", Excl(Top(), p)),
    ("(p -> q) -> r", Imp(Imp(p, q), r)),
    ("web -> b", Imp(Atom("web"), Atom("b"))),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (Imp(p, q), "p -> q"),
    (BNegR(And(p, q)), "b> (p & q)"),
    (Bot(), "F"),
    (Imp(Imp(p, q), r), "(p -> q) -> r"),
    (Excl(p, Excl(q, r)), "p -< (q -< r)"),
    (And(p, And(q, r)), "p & (q & r)"),
    (WNegL(BNegR(p)), "w< b> p"),
])
def test_print(f, text):
    assert to_text(f) == text


@pytest.mark.parametrize("text, pos", [
    ("", 0), ("p &", 3), ("(p", 2), ("p q", 2), ("p > q", 2), ("P", 0), ("p -> ", 5),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.pos == pos
    assert "position" in str(exc.value)


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as exc:
        parse("p &")
    assert "atom" in exc.value.expected and "(" in exc.value.expected


@pytest.mark.parametrize("f, expected", [
    (p, [p]),
    (Imp(p, q), [p, q, Imp(p, q)]),
    (BNegR(BNegL(p)), [p, BNegL(p), BNegR(BNegL(p))]),
    (And(p, p), [p, And(p, p)]),
])
def test_subformulas(f, expected):
    assert subformulas(f) == expected


@settings(max_examples=300, deadline=None)
@given(formulas(8))
def test_round_trip(f):
    assert parse(to_text(f)) == f


@settings(max_examples=200, deadline=None)
@given(formulas(6))
def test_subformulas_child_before_parent(f):
    subs = subformulas(f)
    assert len(subs) <= size(f)
    assert len(set(subs)) == len(subs)
    pos = {g: i for i, g in enumerate(subs)}
    for g in subs:
        for c in children(g):
            assert pos[c] < pos[g]
    assert subs[-1] == f
