import io
import json

import pytest

from bdlogic.cli import EX_DATAERR, EX_USAGE, build_parser, run
from bdlogic.formats import kripke_to_json
from bdlogic.kripke import KripkeModel


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def records(*argv):
    code, out, _ = call("--format", "records", *argv)
    return code, [json.loads(line) for line in out.splitlines()]


def test_consequence_valid():
    code, out, _ = call("consequence", "--logic", "bd+", "--conclusion", "~(p->q) <-> (neg ~p & ~q)")
    assert code == 0 and out.startswith("valid")


def test_consequence_i3g3_witness():
    code, recs = records("consequence", "--logic", "i3g3", "--conclusion", "p | ~p")
    assert code == 1
    assert recs[0]["witness"] == {"assignment": {"p": "i"}}


def test_countermodel_two_worlds():
    code, recs = records("countermodel", "--logic", "bdi3", "--conclusion", "p | ~p",
                         "--max-worlds", "3", "--max-domain", "1")
    assert code == 1
    assert len(recs[0]["witness"]["model"]["worlds"]) == 2


def test_translate_reduce():
    code, out, _ = call("translate", "--mode", "reduce", "--formula", "~(p->q)")
    assert code == 0 and out == "(~p -> bot) & ~q\n"


def test_inconclusive_exit_two():
    code, out, _ = call("countermodel", "--logic", "bdi3", "--conclusion", "~p -> neg p")
    assert code == 2 and "no countermodel within bounds" in out


def test_consequence_falls_back_to_derivation():
    code, out, _ = call("consequence", "--logic", "bdi3", "--conclusion", "p -> p")
    assert code == 0 and "derivation found" in out
    code, _, _ = call("consequence", "--logic", "bdi3", "--conclusion", "p -> p", "--budget", "0")
    assert code == 2


def test_usage_errors():
    assert call()[0] == EX_USAGE
    assert call("consequence", "--logic", "s4", "--conclusion", "p")[0] == EX_USAGE
    assert call("eval", "--logic", "bdi", "--semantics", "matrix", "--formula", "p")[0] == EX_USAGE
    assert call("compare", "--left", "dunn", "--right", "bdi", "--transfer", "--depth", "1")[0] == EX_USAGE


def test_data_errors(tmp_path):
    code, _, err = call("translate", "--formula", "p &")
    assert code == EX_DATAERR and "position" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("validate-model", "--logic", "bdi", "--models", str(bad))[0] == EX_DATAERR
    assert call("check-proof", "--proof", str(tmp_path / "missing.json"))[0] == EX_DATAERR


def test_eval_assignments():
    assert call("eval", "--formula", "p & ~p", "--assign", "p=B")[0] == 0
    assert call("eval", "--formula", "p", "--assign", "p=N")[0] == 1
    code, out, _ = call("eval", "--logic", "i3g3", "--formula", "p | ~p", "--assign", "p=i")
    assert code == 1 and out.strip().endswith(": i")
    assert call("eval", "--logic", "bdi-cx", "--formula", "~p", "--assign", "p=0")[0] == 0


def test_eval_and_validate_model_file(tmp_path):
    m = KripkeModel.build(["w0", "w1"], order=[("w0", "w1")], pos={"w1": {"p": True}}, arities={"p": 0})
    path = tmp_path / "m.json"
    path.write_text(json.dumps(kripke_to_json(m)))
    code, out, _ = call("eval", "--logic", "bdi3", "--models", str(path), "--world", "w0",
                        "--formula", "neg neg p")
    assert code == 0 and out.startswith("(p -> bot) -> bot : T")
    assert call("validate-model", "--logic", "bdi3", "--models", str(path))[0] == 0
    lost = KripkeModel.build(["w0", "w1"], order=[("w0", "w1")], pos={"w0": {"p": True}})
    path.write_text(json.dumps(kripke_to_json(lost)))
    code, out, _ = call("validate-model", "--logic", "bdi", "--models", str(path))
    assert code == 1 and "monotone" in out


def test_validate_model_population_checks():
    code, out, _ = call("validate-model", "--logic", "bdi3", "--random", "30", "--depth", "2",
                        "--checks", "persistence", "decidedness", "reduction", "reduction-dn4")
    assert code == 0
    assert out.count("0 violations") == 4


def test_check_proof(tmp_path):
    code, out, _ = call("check-proof", "--corpus")
    assert code == 0 and "rem-ax" in out
    from bdlogic.corpus import build_corpus
    from bdlogic.formats import dump_json, proof_to_json
    obj = proof_to_json(build_corpus()[0])
    obj["steps"][-1]["formula"] = "q"
    path = tmp_path / "bad.json"
    path.write_text(dump_json(obj))
    code, recs = records("check-proof", "--proof", str(path))
    assert code == 1 and recs[0]["accepted"] is False


def test_verify_axioms():
    assert call("verify-axioms", "--logic", "bd+", "--depth", "1", "--max-domain", "1")[0] == 0
    assert call("verify-axioms", "--logic", "i3g3", "--depth", "1")[0] == 0
    code, out, _ = call("verify-axioms", "--logic", "bdi", "--schema", "i2", "--depth", "1")
    assert code == 1 and "i2:" in out
    code, recs = records("verify-axioms", "--logic", "bdi-cx", "--depth", "1", "--max-domain", "1")
    assert code == 1 and recs[0]["failed_schemas"] == ["Ax16"]


def test_compare_writes_report(tmp_path):
    code, out, _ = call("compare", "--left", "dunn", "--right", "four", "--depth", "2", "--out", str(tmp_path))
    assert code == 1
    assert sorted(p.suffix for p in tmp_path.iterdir()) == [".png", ".tsv", ".txt"]
    code, recs = records("compare", "--left", "four", "--right", "i3g3", "--depth", "2", "--transfer")
    assert code == 0 and len(recs[0]["transfer"]) == 2


def test_enumerate():
    code, out, _ = call("enumerate", "--depth", "2", "--count")
    assert code == 0 and out.strip() == "603"
    code, out, _ = call("enumerate", "--depth", "1", "--atoms", "p")
    assert out.splitlines()[:3] == ["p", "bot", "~p"]


@pytest.mark.parametrize("argv", [
    ("countermodel", "--logic", "bdi3", "--conclusion", "p | ~p"),
    ("compare", "--left", "bdi3", "--right", "dn3+i3", "--depth", "2"),
    ("verify-axioms", "--logic", "dn4", "--depth", "1", "--models", "20"),
])
def test_byte_identical_output(argv):
    for fmt in ("text", "records"):
        first = call("--format", fmt, *argv)
        assert call("--format", fmt, *argv) == first


def test_every_command_is_registered():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == {"eval", "consequence", "countermodel", "validate-model", "check-proof",
                                "translate", "verify-axioms", "compare", "enumerate"}


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("BDLOGIC_WORKERS", "2")
    code, out, _ = call("compare", "--left", "dunn", "--right", "star", "--depth", "1",
                        "--fragment", "unary-fo", "--max-domain", "2")
    monkeypatch.setenv("BDLOGIC_WORKERS", "1")
    assert (code, out) == call("compare", "--left", "dunn", "--right", "star", "--depth", "1",
                               "--fragment", "unary-fo", "--max-domain", "2")[:2]
