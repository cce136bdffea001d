import pytest

from bdlogic import soundness as S
from bdlogic.hilbert import schema
from bdlogic.kripke import random_models


def test_dunn_sweep_small():
    rep = S.sweep_dunn(1, (1,))
    assert rep.ok and rep.checked > 1000
    assert set(rep.per_schema) == {f"Ax{i}" for i in range(1, 22)}


def test_dunn_sweep_detects_non_axioms():
    rep = S.sweep_dunn(1, (1,), logic="bdi3")
    assert rep.failed_schemas() == ["i2", "i3"]
    assert all(str(f).startswith(f.schema) for f in rep.failures)


@pytest.mark.parametrize("logic", ["i3g3", "g3"])
def test_table_sweeps(logic):
    rep = S.sweep_tables(logic, 1)
    assert rep.ok and rep.checked > 0
    with pytest.raises(ValueError):
        S.sweep_tables("bdi3", 1)


def test_modus_ponens_preserves_designation():
    assert S.mp_preserves_four() and S.mp_preserves_g3()


@pytest.mark.parametrize("logic", ["bdi", "bdi3", "dn3", "dn4", "mh"])
def test_kripke_sweeps(logic):
    models = random_models(logic, 40, seed=5, max_worlds=3, max_domain=2)
    rep = S.sweep_kripke(logic, models, 1)
    assert rep.ok, rep.failures[:3]


def test_bdi_models_separate_i2_and_i3():
    models = random_models("bdi", 60, seed=0, max_worlds=3, max_domain=1)
    for sid in ("i2", "i3"):
        rep = S.sweep_kripke("bdi", models, 1, schemas=[schema(sid)])
        assert rep.failed_schemas() == [sid]


def test_nontrivial_sweep_fails_only_on_double_negation():
    rep = S.sweep_nontrivial(1, False, (1,))
    assert rep.failed_schemas() == ["Ax16"]
    assert S.sweep_nontrivial(1, True, (1,)).failed_schemas() == ["Ax16"]
    assert S.nontrivial_rules_preserve()
    assert S.nontrivial_witness() == {"p": 0}
