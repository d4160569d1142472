import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import formulas
from oracles import naive_extension, naive_frame_ok
from lnod.kripke import (ModelError, Violation, WorldSet, check_frame_conditions, extension,
                         extension_mask, is_up_closed, make_model, model_from_json,
                         model_to_json, persistent, satisfies, valid_on_model)
from lnod.search import random_model
from lnod.syntax import Atom, BNegL, BNegR, Bot, Top, WNegL, WNegR, parse

seeds = st.integers(0, 2 ** 32 - 1)


def strict_model(seed, max_worlds=4):
    r = random.Random(seed)
    return random_model(r, r.randint(1, max_worlds))


def ws(m, *worlds):
    return WorldSet.of(worlds, m.n)


# -- frame conditions ----------------------------------------------------------

def test_identity_order_has_no_violations():
    m = make_model(3, [], frown=[(0, 1), (2, 2)], smile=[(1, 0), (0, 2)])
    assert check_frame_conditions(m) == []


def test_fc_bnegr_violation():
    m = make_model(2, [(0, 1)], smile=[(0, 0)])
    bad = check_frame_conditions(m)
    assert Violation("FC-b>", (0, 1, 0)) in bad
    assert not naive_frame_ok(2, m.leq, m.frown, m.smile)


def test_fc_bnegr_repaired_but_wnegl_still_fails():
    # FC-b> holds once 0 ⌣ 1 is added; FC-w< still fails because world 1
    # has no ⌣-successor, and ◁{1} = {0} is indeed not up-closed.
    m = make_model(2, [(0, 1)], smile=[(0, 0), (0, 1)], val={"p": [1]})
    bad = check_frame_conditions(m)
    assert not [v for v in bad if v.condition == "FC-b>"]
    assert Violation("FC-w<", (0, 1, 0)) in bad
    assert extension(m, WNegL(Atom("p"))) == ws(m, 0)
    assert not persistent(m, WNegL(Atom("p")))


def test_fc_symmetric_smile_is_strict():
    m = make_model(2, [(0, 1)], smile=[(0, 0), (0, 1), (1, 1), (1, 0)])
    assert check_frame_conditions(m) == []


def test_preorder_violation_reported_first():
    from lnod.kripke import KripkeModel
    m = KripkeModel(2, frozenset({(0, 0)}), frozenset(), frozenset(), ())
    bad = check_frame_conditions(m)
    assert bad and all(v.condition == "preorder" for v in bad)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_frame_conditions_match_oracle(seed):
    r = random.Random(seed)
    n = r.randint(1, 3)
    m = random_model(r, n, strict=False, density=0.4)
    assert (check_frame_conditions(m) == []) == naive_frame_ok(n, m.leq, m.frown, m.smile)


# -- evaluation examples -------------------------------------------------------

def test_m1_double_negation(m1):
    assert extension(m1, parse("~~p")) == ws(m1, 0, 1)
    assert extension(m1, parse("p")) == ws(m1, 1)
    assert satisfies(m1, 0, parse("~~p"))
    assert not satisfies(m1, 0, parse("p"))
    assert valid_on_model(m1, parse("p -> ~~p"))
    assert not valid_on_model(m1, parse("~~p -> p"))
    assert extension(m1, parse("~~p -> p")) == ws(m1, 1)
    assert persistent(m1, parse("~~p"))


def test_m2_black_right(m2):
    assert extension(m2, parse("b> p")) == ws(m2, 1)


def test_m3_white_right_black_left(m3):
    assert extension(m3, parse("w> p")) == ws(m3, 0)
    assert extension(m3, parse("b< p")) == ws(m3, 0, 1)


@pytest.mark.parametrize("seed", range(5))
def test_constants(seed):
    m = strict_model(seed)
    assert extension(m, Top()).mask == m.full
    assert extension(m, Bot()).mask == 0
    assert valid_on_model(m, Top())
    assert not any(satisfies(m, w, Bot()) for w in m.worlds)


def test_missing_atom_is_empty(m1):
    assert extension(m1, Atom("zz")).mask == 0


def test_satisfies_unknown_world(m1):
    with pytest.raises(ModelError):
        satisfies(m1, 5, Top())


def test_lax_model_can_break_persistence():
    m = make_model(2, [(0, 1)], smile=[(1, 0)], val={"p": [0, 1]})
    assert check_frame_conditions(m)
    assert extension(m, parse("b> p")).mask == 0  # everything satisfies p
    assert persistent(m, parse("b> p"))
    m = make_model(2, [(0, 1)], smile=[(1, 0)], val={"p": [1]})
    # 1 ⌣ 0 with 1 ∈ p, so ▶p = ∅; ▶(p -> F) = {0}, not up-closed
    assert extension(m, parse("b> ~p")) == ws(m, 0)
    assert not persistent(m, parse("b> ~p"))


# -- properties ----------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(seeds, formulas(4, ("p", "q")))
def test_extension_matches_naive_clauses(seed, f):
    m = strict_model(seed)
    got = set(extension(m, f))
    assert got == naive_extension(m, f)
    assert all(satisfies(m, w, f) == (w in got) for w in m.worlds)


@settings(max_examples=120, deadline=None)
@given(seeds, formulas(4, ("p", "q")))
def test_non_strict_models_match_naive_clauses(seed, f):
    r = random.Random(seed)
    m = random_model(r, r.randint(1, 4), strict=False, density=0.4)
    assert set(extension(m, f)) == naive_extension(m, f)


@settings(max_examples=150, deadline=None)
@given(seeds, formulas(3, ("p", "q")), formulas(3, ("p", "q")))
def test_monotone_and_antitone(seed, a, b):
    from lnod.syntax import And, Or
    m = strict_model(seed)
    A, B = extension_mask(m, a), extension_mask(m, b)
    assert extension_mask(m, And(a, b)) & ~A == 0
    assert A & ~extension_mask(m, Or(a, b)) == 0
    if A & ~B == 0:
        for neg in (BNegR, BNegL, WNegR, WNegL):
            assert extension_mask(m, neg(b)) & ~extension_mask(m, neg(a)) == 0


@settings(max_examples=200, deadline=None)
@given(seeds, formulas(3, ("p", "q")), formulas(3, ("p", "q")))
def test_galois_and_cogalois(seed, a, b):
    m = strict_model(seed)
    A, B = extension_mask(m, a), extension_mask(m, b)
    le = lambda x, y: x & ~y == 0
    assert le(A, extension_mask(m, WNegR(b))) == le(B, extension_mask(m, BNegL(a)))
    assert le(extension_mask(m, BNegR(b)), A) == le(extension_mask(m, WNegL(a)), B)


@settings(max_examples=200, deadline=None)
@given(seeds, formulas(4, ("p", "q")))
def test_persistence_on_strict_models(seed, f):
    m = strict_model(seed, max_worlds=5)
    assert persistent(m, f)


# -- construction and JSON -----------------------------------------------------

def test_leq_closure_is_reported():
    m = make_model(3, [(0, 1), (1, 2)])
    assert (0, 2) in m.leq and m.closure_added == {(0, 2)}
    assert all((w, w) in m.leq for w in range(3))


def test_valuation_must_be_up_closed():
    with pytest.raises(ModelError):
        make_model(2, [(0, 1)], val={"p": [0]})


def test_strict_flag_enforces_frame_conditions():
    with pytest.raises(ModelError):
        make_model(2, [(0, 1)], smile=[(0, 0)], strict=True)
    m = make_model(2, [(0, 1)], smile=[(0, 0)], strict=True, validate=False)
    assert check_frame_conditions(m)


def test_json_round_trip(m1):
    doc = {"worlds": ["w0", "w1"], "leq": [["w0", "w1"]], "frown": [],
           "smile": [["w0", "w1"]], "val": {"p": ["w1"]}, "strict": False}
    m = model_from_json(doc)
    assert m.smile == {(0, 1)} and m.val == {"p": 2}
    again = model_from_json(json.loads(json.dumps(model_to_json(m))))
    assert again == m
    # unnamed models gain default names on the way out
    back = model_from_json(model_to_json(m1))
    assert model_to_json(back) == model_to_json(m1)
    assert (back.leq, back.frown, back.smile, back.valuation) == \
        (m1.leq, m1.frown, m1.smile, m1.valuation)


@pytest.mark.parametrize("doc", [
    {},
    {"worlds": ["a", "a"]},
    {"worlds": ["a"], "leq": [["a", "b"]]},
    {"worlds": ["a"], "val": {"p": "a"}},
    {"worlds": []},
])
def test_bad_json(doc):
    with pytest.raises(ModelError):
        model_from_json(doc)


def test_world_names_index_in_order():
    m = model_from_json({"worlds": ["top", "bot"], "leq": [["bot", "top"]], "val": {"p": ["top"]}})
    assert m.leq >= {(1, 0)}
    assert m.world_index("bot") == 1
    assert satisfies(m, "bot", parse("~~p"))


def test_worldset_operations():
    a, b = WorldSet.of([0, 1], 3), WorldSet.of([1, 2], 3)
    assert a | b == WorldSet(7, 3)
    assert a & b == WorldSet.of([1], 3)
    assert ~a == WorldSet.of([2], 3)
    assert a - b == WorldSet.of([0], 3)
    assert (a & b) <= a and not a <= b
    assert 1 in a and 2 not in a and list(b) == [1, 2] and len(a) == 2
    with pytest.raises(ValueError):
        WorldSet.of([3], 3)
    with pytest.raises(TypeError):
        a | WorldSet(0, 2)


def test_is_up_closed(m1):
    assert is_up_closed(m1, 0b10) and not is_up_closed(m1, 0b01)
