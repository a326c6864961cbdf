import json

import numpy as np
import pytest

from spinbath.config import config_from_dict
from spinbath.runs import (
    _steady_distance,
    chain_sites,
    congested_gaps,
    fmt,
    gap_iqr,
    run_config,
    snap_to_dt,
    write_csv,
)


class FakeOps:
    def __init__(self, freqs):
        self.ops = {w: None for w in freqs}


class FakeEig:
    def __init__(self, gaps):
        self.gaps = np.asarray(gaps, dtype=float)


def test_fmt():
    assert fmt(None) == ""
    assert fmt("boom") == "boom"
    assert fmt(3) == "3"
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(float("nan")) == "nan"


def test_write_csv_deterministic(tmp_path):
    rows = [[1.0, None, "x"], [2.5, 0.1 + 0.2, ""]]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, ["u", "v", "w"], rows)
    write_csv(b, ["u", "v", "w"], rows)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text() == "u,v,w\n1,,x\n2.5,0.3,\n"


def test_gap_iqr_equally_spaced():
    # allowed gaps {1, 2, 3, 4}: quartiles 1.75 and 3.25 under linear
    # interpolation, so the IQR is 1.5
    ops = [FakeOps([-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0])]
    assert gap_iqr(None, ops) == pytest.approx(1.5)


def test_gap_iqr_needs_two_transitions():
    assert gap_iqr(None, [FakeOps([-1.0, 1.0])]) is None


def test_congested_gaps():
    assert congested_gaps(FakeEig([1.0, 1.5]), gamma=0.1)
    assert not congested_gaps(FakeEig([1.0, 3.0]), gamma=0.1)
    assert not congested_gaps(FakeEig([1.0]), gamma=0.1)


def test_snap_to_dt():
    assert snap_to_dt(40.0, 0.01) == pytest.approx(40.0)
    assert snap_to_dt(40.004, 0.01) == pytest.approx(40.0)
    assert snap_to_dt(0.0001, 0.01) == pytest.approx(0.01)


def test_chain_sites():
    assert chain_sites(2) == [0]
    assert chain_sites(3) == [0, 2]
    assert chain_sites(4) == [0, 2]


def test_sweep_point_records_failure():
    cfg = config_from_dict({"kind": "steady_state"})
    from spinbath.config import config_to_dict

    dist, iqr, error = _steady_distance(
        config_to_dict(cfg), 0.8, 0.5, beta=1.0, gamma=-1.0, g=0.1
    )
    assert dist is None and iqr is None
    assert "ValueError" in error


def test_run_report_deterministic(tmp_path):
    cfg = config_from_dict(
        {
            "kind": "rates_plot",
            "beta_grid": [1.0],
            "gamma": 0.1,
            "omega_grid": [0.5, 1.0],
            "figures": False,
            "out_prefix": "det",
        }
    )
    run_config(cfg, tmp_path / "one")
    run_config(cfg, tmp_path / "two")
    a = (tmp_path / "one" / "det_rates.csv").read_bytes()
    b = (tmp_path / "two" / "det_rates.csv").read_bytes()
    assert a == b


def test_trajectory_run_contract(tmp_path):
    cfg = config_from_dict(
        {
            "kind": "trajectory",
            "A": 0.8,
            "B": 0.5,
            "beta": 1.0,
            "gamma": 0.1,
            "g": 0.1,
            "t_cycle": 40.0,
            "max_cycles": 2,
            "target_distance": 1e-9,
            "out_prefix": "t",
        }
    )
    report = run_config(cfg, tmp_path)
    assert report["stop_reason"] == "max_cycles"
    assert report["cycles_run"] == 2
    assert report["ergodic"] is True
    assert report["congested_gaps"] is True  # gaps within 10 Gamma = 1.0
    assert 0.0 < report["spectral_gap"] < 1.0
    ratios = report["regime_ratios"]
    assert ratios["g_over_gamma"] == pytest.approx(1.0)
    assert report["wall_time_s"] > 0
    data = np.genfromtxt(
        tmp_path / "t_trajectory.csv", delimiter=",", names=True
    )
    assert data.dtype.names == (
        "t",
        "pop_e1",
        "pop_e2",
        "pop_e3",
        "pop_e4",
        "trace_distance",
        "coherence_norm",
        "gibbs_e1",
        "gibbs_e2",
        "gibbs_e3",
        "gibbs_e4",
    )
    assert data["t"][0] == 0.0 and data["t"][-1] == pytest.approx(80.0)
    # times strictly increasing: cycle boundaries are not double-recorded
    assert np.all(np.diff(data["t"]) > 0)
    assert (tmp_path / "t_trajectory.png").exists()
    saved = json.loads((tmp_path / "t_report.json").read_text())
    assert saved["cycles_run"] == 2


def test_steady_state_run_contract(tmp_path):
    cfg = config_from_dict(
        {
            "kind": "steady_state",
            "t_cycle": 40.0,
            "figures": False,
            "out_prefix": "ss",
        }
    )
    report = run_config(cfg, tmp_path)
    assert report["trace_distance"] < 0.05
    data = np.genfromtxt(
        tmp_path / "ss_steady_state.csv", delimiter=",", names=True
    )
    np.testing.assert_allclose(np.sum(data["steady_population"]), 1.0, atol=1e-8)


def test_oracle_run_contract(tmp_path):
    cfg = config_from_dict(
        {
            "kind": "oracle",
            "hamiltonian": "single_spin",
            "h_field": 2.0,
            "coupling_sites": [0],
            "beta": 1.0,
            "gamma": 0.1,
            "oracle_omega": 4.0,
            "oracle_g_values": [0.05],
            "oracle_t_final": 10.0,
            "figures": False,
            "out_prefix": "o",
        }
    )
    report = run_config(cfg, tmp_path)
    assert report["monotone_in_g"] is True
    assert len(report["max_deviations"]) == 1
    data = np.genfromtxt(tmp_path / "o_oracle.csv", delimiter=",", names=True)
    assert data.dtype.names == ("t", "deviation_g005")
