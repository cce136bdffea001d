import itertools

import pytest
from hypothesis import given, settings

from bdlogic.matrices import (
    B, DUNN_VALUES, F, N, DunnBatch, DunnModel, DunnValue, EvaluationError, FourValue, MatrixBatch,
    ThreeValue, assignments, consequence_four, consequence_g3, dunn_consequence, eval_dunn,
    eval_four, eval_g3, nontrivial_eval,
)
from bdlogic.syntax import parse
from bdlogic.verdict import Status

from conftest import formulas


def test_dunn_value_names():
    assert [str(v) for v in DUNN_VALUES] == ["T", "B", "N", "F"]
    assert DunnValue.parse("b") is B
    with pytest.raises(ValueError):
        DunnValue.parse("X")


@pytest.mark.parametrize("a", DUNN_VALUES)
@pytest.mark.parametrize("b", DUNN_VALUES)
def test_dunn_clauses(a, b):
    v = {"p": a, "q": b}
    assert eval_dunn(v, parse("~p")) == DunnValue(a.has0, a.has1)
    conj = eval_dunn(v, parse("p & q"))
    assert conj == DunnValue(a.has1 and b.has1, a.has0 or b.has0)
    disj = eval_dunn(v, parse("p | q"))
    assert disj == DunnValue(a.has1 or b.has1, a.has0 and b.has0)
    imp = eval_dunn(v, parse("p -> q"))
    assert imp == DunnValue(not a.has1 or b.has1, not a.has0 and b.has0)


def test_dunn_bot_and_weak_negation():
    assert eval_dunn({}, parse("bot")) == F
    assert eval_dunn({"p": B}, parse("neg p")) == DunnValue(False, False)
    assert eval_dunn({"p": N}, parse("neg p")) == B


def test_dunn_first_order():
    m = DunnModel(("c", "d"), {"P": 1}, {"P": frozenset({("c",)})},
                  {"P": frozenset({("c",), ("d",)})}, frozenset({"c"}))
    assert eval_dunn(m, parse("P(c)")) == B
    assert eval_dunn(m, parse("forall x. P(x)")) == F
    assert eval_dunn(m, parse("exists x. P(x)")) == B
    assert eval_dunn(m, parse("~forall x. P(x)")).has1


def test_dunn_model_validation():
    with pytest.raises(ValueError):
        DunnModel((), {}, {}, {})
    with pytest.raises(ValueError):
        DunnModel(("d",), {"P": 1}, {"P": frozenset({("e",)})}, {})


@settings(max_examples=60)
@given(formulas())
def test_dunn_batch_matches_recursive(f):
    batch = DunnBatch(["p", "q"])
    t, fa = batch.value(f)
    for k in range(batch.size):
        v = eval_dunn(batch.assignment(k), f)
        assert (t[k], fa[k]) == (v.has1, v.has0)


def test_dunn_consequence_verdicts():
    assert dunn_consequence([], parse("~(p->q) <-> (neg ~p & ~q)")).valid
    v = dunn_consequence([parse("p"), parse("~p")], parse("q"))
    assert v.refuted
    assert eval_dunn(v.witness, parse("p")).has1 and not eval_dunn(v.witness, parse("q")).has1
    fo = dunn_consequence([parse("forall x. P(x)")], parse("P(c)"))
    assert fo.status is Status.NONE_WITHIN_BOUNDS
    assert dunn_consequence([parse("P(c)")], parse("forall x. P(x)")).refuted


def test_four_valued_tables():
    assert str("".join(str(v) for v in FourValue)) == "1ij0"
    i, j = FourValue.I, FourValue.J
    assert eval_four(parse("p | ~p"), {"p": i}) is i
    assert eval_four(parse("~p"), {"p": i}) is j
    assert eval_four(parse("p -> p"), {"p": j}) is FourValue.ONE
    assert eval_four(parse("~bot"), {}) is FourValue.ONE


def test_four_consequence():
    v = consequence_four([], parse("p | ~p"))
    assert v.refuted and v.witness == {"p": FourValue.I}
    assert consequence_four([], parse("(p -> q) | (q -> p)")).valid
    assert consequence_four([], parse("p | (p -> q)")).refuted
    assert consequence_four([], parse("p | (p -> q) | neg q")).valid
    assert consequence_four([parse("p"), parse("p -> q")], parse("q")).valid


def test_g3_tables():
    i = ThreeValue.I
    assert eval_g3(parse("p | neg p"), {"p": i}) is i
    assert eval_g3(parse("neg neg p -> p"), {"p": i}) is i
    assert consequence_g3([], parse("neg p | neg neg p")).valid
    assert consequence_g3([], parse("p | neg p")).refuted
    assert consequence_g3([], parse("p | (p -> q) | neg q")).valid
    with pytest.raises(EvaluationError):
        eval_g3(parse("~p"), {"p": i})


def test_matrix_batch_matches_tables():
    for kind, ev, carrier in (("four", eval_four, FourValue), ("g3", eval_g3, ThreeValue)):
        mb = MatrixBatch(["p", "q"], kind)
        for text in ["p -> q", "(p -> q) | (q -> p)", "neg (p & q)", "p | neg p"]:
            f = parse(text)
            arr = mb.value(f)
            for k in range(mb.size):
                assert arr[k] == int(ev(f, mb.assignment(k)))


def test_nontrivial_table():
    for vals in assignments(["p", "q"], (0, 1)):
        assert nontrivial_eval(parse("~p"), vals) == 1
        assert nontrivial_eval(parse("~~(p & neg p)"), vals) == 1
        assert nontrivial_eval(parse("p -> q"), vals) == int(not vals["p"] or vals["q"])
    assert nontrivial_eval(parse("p"), {"p": 0}) == 0
    fo = {("P", ("a",)): 1, ("P", ("b",)): 0}
    assert nontrivial_eval(parse("exists x. P(x)"), fo, domain=("a", "b")) == 1
    assert nontrivial_eval(parse("forall x. P(x)"), fo, domain=("a", "b")) == 0


def test_assignments_order():
    got = list(assignments(["p", "q"], (0, 1)))
    assert got == [dict(zip("pq", v)) for v in itertools.product((0, 1), repeat=2)]
