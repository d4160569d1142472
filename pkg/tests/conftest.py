import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from lnod import syntax as S
from lnod.kripke import make_model
from lnod.search import random_model

ATOM_NAMES = ("p", "q", "r", "s")


def formulas(max_depth=8, atom_names=ATOM_NAMES):
    leaves = st.one_of(st.sampled_from(atom_names).map(S.Atom), st.just(S.Top()), st.just(S.Bot()))

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(S.BINARY), children, children).map(lambda t: t[0](t[1], t[2])),
            st.tuples(st.sampled_from(S.UNARY), children).map(lambda t: t[0](t[1])),
        )

    return st.recursive(leaves, extend, max_leaves=2 ** max_depth).filter(
        lambda f: S.depth(f) <= max_depth)


def random_formula(rng, depth, atom_names=("p", "q")):
    if depth == 0 or rng.random() < 0.2:
        return rng.choice([S.Atom(rng.choice(atom_names)), S.Top(), S.Bot()]) \
            if rng.random() < 0.2 else S.Atom(rng.choice(atom_names))
    if rng.random() < 0.4:
        return rng.choice(S.UNARY)(random_formula(rng, depth - 1, atom_names))
    return rng.choice(S.BINARY)(random_formula(rng, depth - 1, atom_names),
                                random_formula(rng, depth - 1, atom_names))


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture
def m1():
    # 2-chain 0 <= 1, p true at the top
    return make_model(2, [(0, 1)], val={"p": [1]}, strict=True)


@pytest.fixture
def m2():
    return make_model(2, [], smile=[(0, 1)], val={"p": []}, strict=True)


@pytest.fixture
def m3():
    return make_model(2, [], frown=[(0, 1)], val={"p": [0]}, strict=True)


@pytest.fixture
def strict_models(rng):
    return [random_model(rng, rng.randint(1, 5)) for _ in range(60)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
