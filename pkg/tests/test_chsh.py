import math

import numpy as np
import pytest

import oracles
from bivector_bell.algebra import DomainError, UnitVector3
from bivector_bell.chsh import (
    CSV_HEADER,
    DEFAULT_ANGLES,
    PAIRS,
    Estimator,
    ExperimentConfig,
    Outcome,
    UndefinedCellError,
    chsh_S,
    christian_lhv,
    csv_rows,
    run_experiment,
    scan_detection_loophole,
    singlet_reference,
    singlet_S,
    summary,
    threshold_detection_lhv,
)


def cfg_from(angles=DEFAULT_ANGLES, trials=20_000, seed=0):
    return ExperimentConfig.from_angles(*angles, trials=trials, seed=seed)


# -- models ------------------------------------------------------------------------


def test_hidden_sign_outcomes():
    m = christian_lhv()
    hidden = np.array([1, -1], dtype=np.int8)
    for setting in (UnitVector3(1, 0, 0), UnitVector3.from_angle(33.0)):
        assert list(m.outcome_A(setting, hidden)) == [1, -1]
        assert list(m.outcome_B(setting, hidden)) == [-1, 1]
    h = m.sample_hidden(np.random.default_rng(0), 1000)
    assert set(np.unique(h)) == {-1, 1}
    assert np.all(m.outcome_A(None, h) * m.outcome_B(None, h) == -1)


def test_threshold_model_tie_and_detection():
    m = threshold_detection_lhv(0.0)
    a = UnitVector3(1.0, 0.0, 0.0)
    h = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])
    assert list(m.outcome_A(a, h)) == [1, -1]
    assert list(m.outcome_B(a, h)) == [-1, 1]
    m = threshold_detection_lhv(0.5)
    h = np.array([[0.4, 0.0, math.sqrt(1 - 0.16)], [0.6, 0.8, 0.0]])
    assert list(m.outcome_A(a, h)) == [Outcome.NO_DETECT, 1]


@pytest.mark.parametrize("tau", [-0.1, 1.0, 1.5])
def test_threshold_range(tau):
    with pytest.raises(DomainError):
        threshold_detection_lhv(tau)


# -- configuration ------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(DomainError):
        cfg_from(trials=0)
    with pytest.raises(DomainError):
        ExperimentConfig(((1, 1, 0), (1, 0, 0)), ((1, 0, 0), (0, 1, 0)), 10)
    with pytest.raises(DomainError):
        cfg_from(seed=-1)


# -- experiments -------------------------------------------------------------------------------


def test_hidden_sign_model_is_perfectly_anticorrelated():
    t = run_experiment(christian_lhv(), cfg_from(angles=(10, 70, 200, 300), seed=5))
    for est in Estimator:
        assert all(t.cells[p].correlation(est) == -1.0 for p in PAIRS)
        assert chsh_S(t, est) == -2.0
    assert t.efficiency == 1.0
    assert sum(c.n_all for c in t.cells.values()) == t.trials


def test_single_trial_leaves_three_cells_undefined():
    t = run_experiment(christian_lhv(), cfg_from(trials=1))
    assert len(t.undefined_cells(Estimator.POST_SELECTED)) == 3
    with pytest.raises(UndefinedCellError, match="a[12]b[12]"):
        chsh_S(t, Estimator.ALL_EVENTS)
    rows = csv_rows(t)
    assert sum(r[5] == "" for r in rows) == 3


def test_threshold_zero_always_detects():
    t = run_experiment(threshold_detection_lhv(0.0), cfg_from())
    assert t.efficiency == 1.0
    for p in PAIRS:
        c = t.cells[p]
        assert c.n_coincident == c.n_all
        assert c.E_postselected == c.E_allevents


def test_threshold_equal_settings_perfect_anticorrelation():
    t = run_experiment(threshold_detection_lhv(0.0), cfg_from(angles=(0, 60, 0, 60)))
    assert t.cells[(0, 0)].E_postselected == -1.0
    assert t.cells[(1, 1)].E_postselected == -1.0


def test_threshold_orthogonal_settings_uncorrelated():
    n = 100_000
    t = run_experiment(threshold_detection_lhv(0.0), cfg_from(angles=(0, 0, 90, 90), trials=n, seed=3))
    c = t.cells[(0, 0)]
    assert abs(c.E_postselected) <= 3 / math.sqrt(c.n_coincident)
    assert abs(oracles.sign_model_correlation(math.pi / 2)) < 1e-9


@pytest.mark.parametrize("deg", [30, 45, 120])
def test_threshold_correlation_follows_sign_model(deg):
    theta = math.radians(deg)
    want = oracles.sign_model_correlation(theta)
    assert want == pytest.approx(-1 + 2 * theta / math.pi, abs=1e-4)
    n = 100_000
    t = run_experiment(threshold_detection_lhv(0.0), cfg_from(angles=(0, 0, deg, deg), trials=n, seed=deg))
    c = t.cells[(0, 0)]
    assert abs(c.E_postselected - want) <= 3 / math.sqrt(c.n_coincident)


def test_threshold_zero_does_not_exceed_bound():
    t = run_experiment(threshold_detection_lhv(0.0), cfg_from(trials=100_000, seed=9))
    s = chsh_S(t, Estimator.POST_SELECTED)
    assert abs(s) <= 2 + 3 * t.stderr_S(Estimator.POST_SELECTED)


def test_estimators_coincide_without_missed_detections():
    t = run_experiment(christian_lhv(), cfg_from())
    assert chsh_S(t, Estimator.POST_SELECTED) == chsh_S(t, Estimator.ALL_EVENTS)


def test_determinism_across_thread_caps():
    cfg = cfg_from(trials=70_000, seed=123)
    m = threshold_detection_lhv(0.3)
    tables = [run_experiment(m, cfg, threads=k) for k in (1, 3, 8)]
    assert tables[0].cells == tables[1].cells == tables[2].cells


def test_thread_cap_from_environment(monkeypatch):
    cfg = cfg_from(trials=40_000, seed=1)
    m = threshold_detection_lhv(0.2)
    monkeypatch.setenv("BIVECTOR_BELL_THREADS", "1")
    one = run_experiment(m, cfg)
    monkeypatch.setenv("BIVECTOR_BELL_THREADS", "8")
    eight = run_experiment(m, cfg)
    assert one.cells == eight.cells
    monkeypatch.setenv("BIVECTOR_BELL_THREADS", "zero")
    with pytest.raises(DomainError):
        run_experiment(m, cfg)


def test_different_seeds_differ():
    m = threshold_detection_lhv(0.0)
    assert run_experiment(m, cfg_from(seed=1)).cells != run_experiment(m, cfg_from(seed=2)).cells


# -- S and reference ------------------------------------------------------------------------------


def test_chsh_S_arithmetic():
    t = run_experiment(christian_lhv(), cfg_from(trials=1000))
    assert chsh_S(t, Estimator.ALL_EVENTS) == -2.0


def test_singlet_reference():
    a = UnitVector3(1, 0, 0)
    assert singlet_reference(a, a) == -1.0
    assert singlet_reference(a, UnitVector3(0, 0, 1)) == 0.0
    assert singlet_reference(a, UnitVector3.from_angle(45)) == pytest.approx(-math.sqrt(2) / 2, abs=1e-15)


def test_singlet_S_default_settings():
    assert abs(abs(singlet_S(cfg_from())) - 2 * math.sqrt(2)) < 1e-9


# -- output formats -------------------------------------------------------------------------------------


def test_summary_keys_and_csv_header():
    t = run_experiment(christian_lhv(), cfg_from(trials=500, seed=4))
    assert list(summary(t)) == ["model", "seed", "trials", "S_postselected", "S_allevents", "stderr_S", "efficiency"]
    assert CSV_HEADER == ("pair", "a_setting", "b_setting", "n_all", "n_coincident", "E_postselected", "E_allevents")
    rows = csv_rows(t)
    assert [r[0] for r in rows] == ["a1b1", "a1b2", "a2b1", "a2b2"]


# -- loophole scan -----------------------------------------------------------------------------------------


def test_scan_report_structure():
    rep = scan_detection_loophole([0.0, 0.5], trials=20_000, seed=2)
    assert [r["tau"] for r in rep["rows"]] == [0.0, 0.5]
    row0 = rep["rows"][0]
    assert row0["efficiency"] == 1.0
    assert row0["postselected_within_bound"]
    assert len(row0["cells"]) == 4
    assert all(c["err_postselected"] > 0 for c in row0["cells"])
    assert all(r["allevents_within_bound"] for r in rep["rows"])
    assert rep["rows"][1]["efficiency"] < 1.0


def test_scan_needs_taus():
    with pytest.raises(DomainError):
        scan_detection_loophole([], trials=10)
