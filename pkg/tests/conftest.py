import pytest
from hypothesis import strategies as st

from bdlogic.kripke import random_models
from bdlogic.syntax import BOT, And, Atom, Imp, Neg, Or


def formulas(atoms=("p", "q"), strong=True, max_leaves=8):
    """Propositional formulas over ``atoms`` and ``bot``."""
    leaves = st.sampled_from([Atom(a) for a in atoms] + [BOT])

    def extend(children):
        binary = st.tuples(st.sampled_from([And, Or, Imp]), children, children).map(
            lambda t: t[0](t[1], t[2]))
        if strong:
            return binary | children.map(Neg)
        return binary

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture(scope="session")
def bdi3_population():
    return random_models("bdi3", 120, seed=7, max_worlds=4, max_domain=2)


@pytest.fixture(scope="session")
def bdi_population():
    return random_models("bdi", 120, seed=3, max_worlds=3, max_domain=1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
