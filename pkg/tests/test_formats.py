import json

import pytest

from bdlogic.corpus import build_corpus
from bdlogic.formats import (
    FormatError, describe, dunn_from_json, dunn_to_json, kripke_from_json, kripke_to_json,
    load_models, load_proof, model_from_json, model_to_json, proof_from_json, proof_to_json,
    star_from_json, star_to_json, witness_to_json,
)
from bdlogic.kripke import KripkeModel, random_models
from bdlogic.matrices import B, N, DunnModel
from bdlogic.star import dunn_to_star


def test_kripke_round_trip():
    for m in random_models("bdi3", 20, seed=2, max_worlds=3, max_domain=2):
        obj = kripke_to_json(m)
        assert kripke_from_json(json.loads(json.dumps(obj))) == m
        assert model_from_json({k: v for k, v in obj.items() if k != "kind"}) == m


def test_dunn_round_trip_and_shorthand():
    m = DunnModel(("c", "d"), {"P": 1, "q": 0}, {"P": frozenset({("c",)}), "q": frozenset({()})},
                  {"P": frozenset({("d",)}), "q": frozenset()}, frozenset({"c"}))
    assert dunn_from_json(dunn_to_json(m)) == m
    short = model_from_json({"assignment": {"p": "B", "q": "n"}})
    assert short == DunnModel.from_assignment({"p": B, "q": N})


def test_star_round_trip():
    s = dunn_to_star(DunnModel.from_assignment({"p": B}))
    assert star_from_json(star_to_json(s)) == s


def test_load_models_shapes(tmp_path):
    m = random_models("bdi", 2, seed=0, max_worlds=2, max_domain=1)
    objs = [model_to_json(x) for x in m]
    for i, payload in enumerate([objs[0], objs, {"models": objs}]):
        path = tmp_path / f"m{i}.json"
        path.write_text(json.dumps(payload))
        assert load_models(path) == ([m[0]] if i == 0 else m)


def test_bad_inputs():
    with pytest.raises(FormatError):
        kripke_from_json({"order": []})
    with pytest.raises(FormatError):
        proof_from_json({"steps": [{"rule": "mp", "formula": "p"}]})
    with pytest.raises(FormatError):
        proof_from_json({"steps": [{"rule": "magic", "formula": "p"}]})
    with pytest.raises(FormatError):
        proof_from_json({"steps": [{"rule": "hyp", "index": 1}]})


def test_proof_round_trip(tmp_path):
    for p in build_corpus():
        obj = json.loads(json.dumps(proof_to_json(p)))
        assert proof_from_json(obj) == p
    path = tmp_path / "p.json"
    path.write_text(json.dumps(proof_to_json(build_corpus()[0])))
    assert load_proof(path) == build_corpus()[0]


def test_describe():
    m = KripkeModel.build(["w0", "w1"], order=[("w0", "w1")], pos={"w1": {"p": True}}, arities={"p": 0})
    assert describe((m, "w0")) == "w0<w1 | w0: | w1: +p @ w0"
    assert describe({"p": "i"}) == "p=i"
    assert describe(DunnModel.from_assignment({"p": B, "q": N})) == "p=B, q=N"
    assert witness_to_json((m, "w0"))["world"] == "w0"
    assert witness_to_json(None) is None
