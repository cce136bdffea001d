from hypothesis import given, settings

from bdlogic.matrices import DUNN_VALUES, DunnModel, assignments, eval_dunn
from bdlogic.star import (
    BatchStar, StarModel, dunn_to_star, enumerate_star_models, star_consequence_bounded, star_force,
)
from bdlogic.syntax import Signature, parse

from conftest import formulas


def two_worlds(at_a=(), at_b=()):
    return StarModel.build(["a", "b"], {"a": "b", "b": "a"}, ("d",),
                           {"a": {x: True for x in at_a}, "b": {x: True for x in at_b}}, (), {"p": 0, "q": 0})


def test_strong_negation_looks_at_the_star_world():
    m = two_worlds(at_a="p")
    assert star_force(m, "a", parse("p"))
    assert star_force(m, "a", parse("~p"))       # p fails at b = a*
    assert not star_force(m, "b", parse("~p"))
    assert star_force(m, "a", parse("~~p"))


def test_star_must_be_an_involution():
    import pytest
    with pytest.raises(ValueError):
        StarModel.build(["a", "b", "c"], {"a": "b", "b": "c", "c": "a"}, ("d",), {}, (), {})


def test_enumeration_counts():
    # one world (a* = a) with p in or out, plus the two-world swaps up to renaming
    models = list(enumerate_star_models(Signature({"p": 0}), 2))
    assert len(models) == len({repr(m) for m in models}) == 10


@settings(max_examples=60)
@given(formulas())
def test_dunn_to_star_transfer(f):
    for v in assignments(["p", "q"], DUNN_VALUES):
        s = dunn_to_star(DunnModel.from_assignment(v))
        a, b = s.worlds
        d = eval_dunn(v, f)
        assert d.has1 == star_force(s, a, f)
        assert d.has0 == (not star_force(s, b, f))


def test_batch_star_matches_recursive():
    models = list(enumerate_star_models(Signature({"p": 0, "q": 0}), 2))
    bs = BatchStar(models)
    for text in ["~(p -> q) | (q -> ~p)", "~~p -> p", "neg ~p & ~neg p"]:
        f = parse(text)
        arr = bs.true(f)
        for k, (i, w) in enumerate(bs.world_ids):
            assert arr[k] == star_force(models[i], w, f)


def test_star_consequence():
    v = star_consequence_bounded([], parse("p | ~p"))
    assert v.refuted
    m, w = v.witness
    assert not star_force(m, w, parse("p | ~p"))
    # a bounded search never claims validity
    assert star_consequence_bounded([], parse("~(p->q) <-> (neg ~p & ~q)")).exit_code == 2
    assert star_consequence_bounded([parse("~~p")], parse("p")).exit_code == 2


def test_star_first_order():
    m = StarModel.build(["a"], {"a": "a"}, ("c", "d"), {"a": {"P": [("c",)]}}, ("c",), {"P": 1})
    assert star_force(m, "a", parse("exists x. P(x)"))
    assert not star_force(m, "a", parse("forall x. P(x)"))
    assert star_force(m, "a", parse("~forall x. P(x)"))
