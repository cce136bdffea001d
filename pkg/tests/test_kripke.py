import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdlogic import kripke as K
from bdlogic.kripke import (
    BatchForcing, KripkeModel, LogicId, check_decidedness, check_persistence, check_reduction,
    conditions, countermodel_search, enumerate_models, force, forcing_kind, frames_for,
    random_models, validate,
)
from bdlogic.syntax import Signature, parse, reduce_dn4

from conftest import formulas


def chain(pos_top=(), neg_top=(), pos_bottom=(), neg_bottom=()):
    as_ext = lambda atoms: {a: True for a in atoms}
    return KripkeModel.build(["w0", "w1"], order=[("w0", "w1")],
                             pos={"w0": as_ext(pos_bottom), "w1": as_ext(pos_top)},
                             neg={"w0": as_ext(neg_bottom), "w1": as_ext(neg_top)},
                             arities={"p": 0, "q": 0})


def test_logic_ids():
    assert LogicId.parse("BDi3") is LogicId.BDI3
    with pytest.raises(ValueError):
        LogicId.parse("s4")
    assert forcing_kind("dn3") == "dn" and forcing_kind("g3") == "mh" and forcing_kind("bd+") == "bdi"
    with pytest.raises(ValueError):
        forcing_kind("bdi-cx")


def test_validate_reports_each_condition():
    lost = KripkeModel.build(["w0", "w1"], order=[("w0", "w1")], pos={"w0": {"p": True}})
    assert [v.kind for v in validate(lost, "bdi").violations] == ["monotone"]
    glut = KripkeModel.build(["a"], pos={"a": {"p": True}}, neg={"a": {"p": True}})
    assert validate(glut, "bdi").ok
    assert "disjoint" in {v.kind for v in validate(glut, "bdi3").violations}
    gap = KripkeModel.build(["a"], arities={"p": 0})
    assert "omniscience" in {v.kind for v in validate(gap, "bdi3").violations}
    assert validate(chain(pos_top="p", neg_top="q"), "bdi3").ok


def test_forcing_on_the_two_world_chain():
    m = chain(pos_top="p")
    assert str(force(m, "w0", parse("p | ~p"), "bdi3")) == "N"
    assert force(m, "w0", parse("neg neg p"), "bdi3").true
    assert force(m, "w1", parse("p"), "bdi3").true
    assert not force(m, "w0", parse("neg p"), "bdi3").true


def test_imp_falsity_depends_on_kind():
    # at a world where p is undecided but later true, and q is false throughout
    m = chain(pos_top="p", neg_bottom="q", neg_top="q")
    f = parse("~(p -> q)")
    assert force(m, "w0", f, "bdi3").true     # box(not F_p) and F_q
    assert force(m, "w0", f, "dn3").true      # box(diamond T_p) and F_q
    m2 = chain(neg_top="pq", neg_bottom="q")
    assert not force(m2, "w0", f, "bdi3").true
    assert not force(m2, "w0", f, "dn3").true
    gap = KripkeModel.build(["a"], neg={"a": {"q": True}}, arities={"p": 0})
    assert force(gap, "a", f, "bdi").true
    assert not force(gap, "a", f, "dn4").true


def test_mh_has_no_strong_negation():
    m = KripkeModel.build(["a"], pos={"a": {"p": True}})
    assert force(m, "a", parse("p | neg p"), "mh").true
    with pytest.raises(ValueError):
        force(m, "a", parse("~p"), "mh")


def test_frames():
    assert len(frames_for(conditions("i3g3"), 3)) == 2
    assert all(f.is_chain() for f in frames_for(conditions("g3"), 3))
    assert len(frames_for(conditions("bd+"), 3)) == 1


def test_enumerated_models_are_valid():
    sig = Signature({"p": 0})
    for logic in ("bdi", "bdi3", "dn3", "mh", "i3g3"):
        models = list(enumerate_models(sig, logic, 3))
        assert models
        assert all(validate(m, logic).ok for m in models)


def test_random_models_valid_and_reproducible():
    a = random_models("bdi3", 30, seed=1, max_worlds=4, max_domain=3)
    b = random_models("bdi3", 30, seed=1, max_worlds=4, max_domain=3)
    assert a == b
    assert all(validate(m, "bdi3").ok for m in a)
    assert max(len(m.worlds) for m in a) > 1


def test_countermodel_search():
    v = countermodel_search([], parse("p | ~p"), "bdi3", max_worlds=3, max_domain=1)
    assert v.refuted
    m, w = v.witness
    assert len(m.worlds) == 2 and validate(m, "bdi3").ok
    assert not force(m, w, parse("p | ~p"), "bdi3").true
    assert countermodel_search([], parse("~p -> neg p"), "bdi3").status.value == "none-within-bounds"
    assert countermodel_search([], parse("~p -> neg p"), "bdi").refuted
    assert countermodel_search([parse("forall x. P(x)")], parse("P(c)"), "bdi", 2, 2).status.value \
        == "none-within-bounds"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["bdi", "bdi3", "dn4", "dn3"]), formulas(max_leaves=6))
def test_batch_forcing_matches_recursive(seed, logic, f):
    models = random_models(logic, 4, seed=seed, max_worlds=3, max_domain=1,
                           sig=Signature({"p": 0, "q": 0}))
    bf = BatchForcing(models, logic)
    t, fa = bf.value(f)
    for k, (i, w) in enumerate(bf.world_ids):
        sf = force(models[i], w, f, logic)
        assert (t[k], fa[k]) == (sf.true, sf.false)


def test_batch_forcing_first_order(bdi3_population):
    models = bdi3_population[:25]
    bf = BatchForcing(models, "bdi3")
    for text in ["forall x. P(x)", "exists x. ~P(x)", "~forall x. (P(x) -> P(c))"]:
        f = parse(text)
        t, fa = bf.value(f)
        for k, (i, w) in enumerate(bf.world_ids):
            if not bf.defined(f)[k]:
                continue
            sf = force(models[i], w, f, "bdi3")
            assert (t[k], fa[k]) == (sf.true, sf.false)


def test_structural_properties(bdi3_population):
    for check in (check_persistence, check_decidedness, check_reduction):
        rep = check(bdi3_population, 2, "bdi3")
        assert rep.checked > 0 and rep.ok, rep.violations[:3]
    assert check_reduction(bdi3_population, 2, "dn4").ok


def test_decidedness_fails_without_bdi3_conditions(bdi_population):
    assert not check_decidedness(bdi_population, 1, "bdi").ok
    assert check_persistence(bdi_population, 2, "bdi").ok


def test_reduction_check_detects_wrong_reduct(bdi_population, monkeypatch):
    assert check_reduction(bdi_population, 2, "bdi").ok
    monkeypatch.setattr(K, "reduce", reduce_dn4)
    assert not check_reduction(bdi_population, 2, "bdi").ok


def test_restrict_keeps_upset():
    m = chain(pos_top="p")
    r = m.restrict("w1")
    assert r.worlds == ("w1",)
