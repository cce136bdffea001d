import json

import pytest

from bdlogic.corpus import (
    build_corpus, check, corpus_dir, corpus_names, load_corpus, mutations, write_corpus,
)
from bdlogic.formats import proof_to_json
from bdlogic.syntax import parse


def test_shipped_files_match_builders():
    shipped = {p.name: p for p in load_corpus()}
    built = {p.name: p for p in build_corpus()}
    assert set(shipped) == set(built) == set(corpus_names())
    for name in built:
        assert proof_to_json(shipped[name]) == proof_to_json(built[name])


def test_corpus_size_and_contents():
    names = corpus_names()
    assert len(names) >= 10
    assert {"rem-ax", "ax15-top"} <= set(names)
    rem = next(p for p in build_corpus() if p.name == "rem-ax")
    assert rem.conclusion == parse("neg (neg ~p & neg p)")
    ax15 = next(p for p in build_corpus() if p.name == "ax15-top")
    assert any(getattr(s.just, "schema", None) == "Ax15" for s in ax15.steps)


@pytest.mark.parametrize("proof", build_corpus(), ids=lambda p: p.name)
def test_every_proof_checks(proof):
    assert check(proof).accepted


@pytest.mark.parametrize("proof", build_corpus(), ids=lambda p: p.name)
def test_every_mutant_is_rejected(proof):
    ms = list(mutations(proof))
    assert len(ms) >= 3 * len(proof.steps)
    survivors = [d for d, m in ms if check(m).accepted]
    assert survivors == []


def test_minimal_proofs_need_i2():
    from bdlogic.hilbert import check_proof
    for p in build_corpus():
        if p.minimal:
            res = check_proof(p.premises, p, "bdi", goal=p.conclusion)
            assert not res.accepted and "i2" in res.reason


def test_write_corpus_round_trip(tmp_path):
    paths = write_corpus(tmp_path)
    assert len(paths) == len(corpus_names())
    for path in paths:
        assert json.loads(path.read_text()) == json.loads((corpus_dir() / path.name).read_text())
