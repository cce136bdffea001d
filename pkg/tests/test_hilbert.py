import pytest

from bdlogic.hilbert import (
    MP, Axiom, Gen, Hyp, InstantiationError, ProofBuilder, Step, axiom_ids, axiom_set, bounded_derive,
    check_proof, instantiate, match_schema,
)
from bdlogic.syntax import Atom, parse, render

p = Atom("p")


def test_axiom_sets():
    bd = axiom_ids("bd+")
    assert bd == [f"Ax{i}" for i in range(1, 22)]
    bdi = axiom_ids("bdi")
    assert "Ax3" not in bdi and len(bdi) == 20
    assert axiom_ids("bdi3") == bdi + ["i1", "i2", "i3"]
    assert axiom_ids("i3g3") == axiom_ids("bdi3") + ["AxG"]
    assert axiom_ids("bdi3", minimal=True) == bdi + ["i2"]
    dn4 = axiom_ids("dn4")
    assert "Ax19" not in dn4 and "DN-neg-imp" in dn4
    assert axiom_ids("dn3") == dn4 + ["i2"]
    cx = axiom_ids("bdi-cx")
    assert "Ax19" not in cx and "Cx-neg-imp" in cx
    assert "i1" in axiom_ids("mh") and not any(s.startswith("Ax1" + d) for s in axiom_ids("mh") for d in "6789")
    assert [s.id for s in axiom_set("bdi")] == bdi


def test_match_schema():
    assert match_schema("Ax16", parse("~~p <-> p")) == {"A": p}
    assert match_schema("Ax16", parse("~~p <-> q")) is None
    sub = match_schema("Ax19", parse("~((p & q) -> r) <-> (neg ~(p & q) & ~r)"))
    assert render(sub["A"]) == "p & q" and render(sub["B"]) == "r"


def test_quantifier_side_conditions():
    assert match_schema("Ax14", parse("(forall x. P(x)) -> P(c)")) is not None
    # the substituted term must be free for x
    assert match_schema("Ax14", parse("(forall x. exists y. R(x, y)) -> exists y. R(y, y)")) is None
    # x may not occur free in B
    assert match_schema("Ax13", parse("(forall x. (P(x) -> P(x))) -> P(x) -> forall x. P(x)")) is None


def test_instantiate_round_trip():
    f = instantiate("Ax19", {"A": "p", "B": "q"})
    assert render(f) == "(~(p -> q) -> (~p -> bot) & ~q) & ((~p -> bot) & ~q -> ~(p -> q))"
    assert match_schema("Ax19", f) == {"A": p, "B": Atom("q")}
    with pytest.raises((InstantiationError, ValueError)):
        instantiate("Ax19", {"A": "p"})


def test_check_proof_accepts_and_rejects():
    ax = instantiate("Ax7", {"A": "p", "B": "q"})
    steps = [Step(p, Hyp(1)), Step(ax, Axiom.of("Ax7", {"A": p, "B": Atom("q")})), Step(parse("p | q"), MP(1, 2))]
    assert check_proof([p], steps, "bdi").accepted
    assert check_proof([p], steps, "bdi", goal=parse("p | q")).accepted
    bad = check_proof([p], steps, "bdi", goal=parse("q"))
    assert not bad.accepted and bad.step == 3
    wrong_mp = steps[:2] + [Step(parse("p | q"), MP(2, 1))]
    assert check_proof([p], wrong_mp, "bdi").step == 3
    assert check_proof([], steps, "bdi").reason == "no premise 1"
    assert "not an axiom" in check_proof([], [Step(instantiate("Ax3", {"A": "p", "B": "q"}), Axiom.of("Ax3"))], "bdi").reason
    assert not check_proof([], [], "bdi").accepted


def test_generalisation():
    ok = ProofBuilder("bdi")
    ok.gen(ok.identity(parse("P(x)")), "x")
    assert check_proof([], ok.build(), "bdi").accepted
    proof = ok.build()
    last = proof.steps[-1]
    mutated = proof.steps[:-1] + (Step(last.formula, Gen(last.just.step, "c")),)
    assert not check_proof([], mutated, "bdi").accepted


def test_builder_deduction_theorem():
    pb = ProofBuilder("bdi")
    with pb.assume("p & q") as h:
        pb.conj(pb.and_right(h.line), pb.and_left(h.line))
    proof = pb.build("swap")
    assert proof.conclusion == parse("p & q -> q & p")
    assert check_proof([], proof, "bdi", goal=proof.conclusion).accepted


def test_bounded_derive():
    proof = bounded_derive([], parse("p -> p"), "bdi")
    assert proof is not None and check_proof([], proof, "bdi", goal=parse("p -> p")).accepted
    assert bounded_derive([parse("~p")], parse("neg p"), "bdi3") is not None
    assert bounded_derive([], parse("p"), "bdi", budget=300) is None
