
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdlogic.bridge import (
    Bounds, assignment4_to_kripke2, build_algebra, compare_semantics, SlashResult,
    derivability_oracle, kripke2_to_assignment4, kripke_transfer_check, level_values, parse_semantics,
    slash, star_transfer_check, table_oracle,
)
from bdlogic.enumeration import enumerate_formulas, formula_levels
from bdlogic.kripke import KripkeModel, force, validate
from bdlogic.matrices import FourValue, eval_four
from bdlogic.syntax import Neg, parse

from conftest import formulas

V4 = list(FourValue)


@pytest.mark.parametrize("value", V4)
def test_assignment_to_chain(value):
    m = assignment4_to_kripke2({"p": value})
    assert validate(m, "i3g3").ok and validate(m, "bdi3").ok
    assert kripke2_to_assignment4(m) == {"p": value}


def test_chain_to_assignment_rejects_other_models():
    two_roots = KripkeModel.build(["a", "b"], pos={"a": {"p": True}, "b": {"p": True}})
    with pytest.raises(ValueError):
        kripke2_to_assignment4(two_roots)


@settings(max_examples=50)
@given(formulas(), st.sampled_from(V4), st.sampled_from(V4))
def test_five_equivalences(f, vp, vq):
    v = {"p": vp, "q": vq}
    m = assignment4_to_kripke2(v)
    x, y = m.worlds[0], m.worlds[1]
    val = eval_four(f, v)
    tx, ty = force(m, x, f, "i3g3"), force(m, y, f, "i3g3")
    assert (tx.true and not tx.false) == (val is FourValue.ONE)
    assert (tx.false and not tx.true) == (val is FourValue.ZERO)
    assert (not tx.true and not tx.false) == (val in (FourValue.I, FourValue.J))
    assert ty.true == (val in (FourValue.ONE, FourValue.I))
    assert ty.false == (val in (FourValue.J, FourValue.ZERO))


def test_transfer_checks_small():
    assert star_transfer_check(depth=2).ok
    fwd, back = kripke_transfer_check(depth=2)
    assert fwd.ok and back.ok and fwd.checked == back.checked > 0


@pytest.mark.parametrize("name", ["dunn", "star", "four", "bdi3", "dn3+i3", "bd+"])
def test_level_path_matches_single_formula_path(name):
    sem = parse_semantics(name)
    alg = build_algebra(sem, ["p", "q"], Bounds(2, 1))
    levels = formula_levels(["p", "q"], 2)
    values = level_values(alg, ["p", "q"], 2)
    for fs, arr in zip(levels, values):
        assert len(fs) == len(arr)
        for f, got in zip(fs, arr):
            assert np.array_equal(got, alg.value(f))


def test_parse_semantics():
    assert parse_semantics("kripke:bdi3").name == "bdi3"
    assert parse_semantics("matrix:i3g3").name == "four"
    assert not parse_semantics("mh").strong
    with pytest.raises(ValueError):
        parse_semantics("bdi-cx")
    with pytest.raises(ValueError):
        parse_semantics("s5")


def test_compare_agreeing_semantics():
    rep = compare_semantics("dunn", "star", 2)
    assert rep.ok and rep.exit_code == 0
    assert rep.checked == 603 and rep.counts["agree"] == 603


def test_compare_finds_hard_disagreements():
    rep = compare_semantics("dunn", "four", 2)
    assert not rep.ok and rep.exit_code == 1
    formulas_ = {r.formula for r in rep.hard}
    assert "p | (p -> q)" in formulas_
    assert all(r.left_witness or r.right_witness for r in rep.hard)


def test_compare_ties_are_not_failures():
    rep = compare_semantics("bdi3", "dn3+i3", 2)
    assert rep.counts["hard"] == 0
    assert rep.exit_code == 0


def test_compare_first_order_fragment():
    rep = compare_semantics("dunn", "star", 1, Bounds(2, 2), fragment="unary-fo")
    assert rep.ok and rep.checked > 0
    with pytest.raises(ValueError):
        compare_semantics("four", "dunn", 1, fragment="unary-fo")
    with pytest.raises(ValueError):
        compare_semantics("mh", "g3", 1)


def test_compare_is_deterministic():
    a = compare_semantics("dunn", "four", 2)
    b = compare_semantics("dunn", "four", 2)
    assert a.summary() == b.summary()
    assert a.rows == b.rows


def test_merge_is_associative():
    reps = [compare_semantics("dunn", "four", d) for d in (0, 1, 2)]
    left = reps[0].merge(reps[1]).merge(reps[2])
    right = reps[0].merge(reps[1].merge(reps[2]))
    assert left.summary() == right.summary()
    assert left.counts == right.counts and left.rows == right.rows
    with pytest.raises(ValueError):
        reps[0].merge(compare_semantics("dunn", "star", 0))


def test_slash_with_table_oracle():
    o = table_oracle()
    assert slash(parse("bot"), o) == SlashResult(False, True)
    assert slash(parse("p -> p"), o) == SlashResult(True, False)
    assert not slash(parse("p | ~p"), o).plus
    assert slash(parse("neg neg (p | ~p)"), o).plus


def test_slash_is_sound_for_the_oracle():
    o = table_oracle()
    for f in enumerate_formulas(["p", "q"], 2):
        r = slash(f, o)
        assert not r.plus or o(f)
        assert not r.minus or o(Neg(f))


def test_slash_with_derivability():
    d = derivability_oracle("bdi", 500)
    assert slash(parse("(p -> p) | q"), d).plus
    assert slash(parse("forall x. (P(x) -> P(x))"), d).plus
    assert slash(parse("exists x. (P(x) -> P(x))"), d, constant_pool=["c"]).plus


def test_bdi3_and_dn3_i3_refute_the_same_formulas_at_depth_4():
    rep = compare_semantics("bdi3", "dn3+i3", 4, Bounds(2, 1))
    # a refutation on one side only would be a hard disagreement
    assert rep.counts["hard"] == 0
    assert rep.verdicts[("left", "refuted")] == rep.verdicts[("right", "refuted")] > 0
