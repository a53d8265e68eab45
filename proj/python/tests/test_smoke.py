import math
import pathlib

import numpy as np
import pytest

import qsync

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"
SHORT = 'scenario = "point_to_point"\nt_end = 20\nsample_every = 50\n'


def tmsv(r):
    c, s = 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def test_coherent_fidelity():
    vac = 0.5 * np.eye(2)
    f = qsync.gaussian_fidelity(vac, np.array([1.0, 0.0]), vac, np.array([1.0, 1.0]))
    assert f == pytest.approx(math.exp(-1.0), abs=1e-12)


def test_squeezed_state():
    for r in (0.1, 0.5, 1.0):
        assert qsync.log_negativity(tmsv(r)) == pytest.approx(2 * r, abs=1e-9)
    assert qsync.symplectic_eigenvalues(tmsv(0.5)) == pytest.approx([0.5, 0.5], abs=1e-12)
    v = tmsv(0.3)
    assert np.array_equal(qsync.partial_transpose(qsync.partial_transpose(v)), v)


def test_second_order_sync_of_vacuum():
    assert qsync.second_order_sync(0.5 * np.eye(8), 2, 3) == pytest.approx(1.0)
    with pytest.raises(qsync.NonPhysicalError):
        qsync.second_order_sync(np.zeros((8, 8)), 2, 3)


def test_generators_and_trace_distance():
    classical, phonon = qsync.gen_small_world(12, 2, 0.3, 2.0, 0.02, seed=4)
    assert classical.shape == (12, 12)
    assert np.array_equal(phonon, phonon.T)
    g = qsync.coupling_matrix(classical, phonon)
    assert g.shape == (48, 48)
    assert qsync.trace_distance(g, g) == pytest.approx(0.0, abs=1e-12)
    nodes, edges = qsync.gen_scale_free(3, 2, 15, seed=2)
    assert nodes == 18 and len(edges) == 33


def test_sync_solver_and_auxiliary_node():
    tri = [(0, 1), (0, 2), (1, 2)]
    sol = qsync.solve_sync_conditions([1.2, 1.2, 1.2], tri, omega_s=1.14)
    assert sol["feasible"]
    assert sol["coupling"][0, 1] == pytest.approx(0.03)
    bad = qsync.solve_sync_conditions([1.0, 1.0, 2.0], tri)
    assert not bad["feasible"]
    aux = qsync.add_auxiliary_node([1.0, 1.0, 2.0], 0.5, 0.1)
    assert aux["mu_a"] == pytest.approx(1.4)
    assert aux["omega_a"] == pytest.approx(1.8)
    with pytest.raises(qsync.InfeasibleError):
        qsync.add_auxiliary_node([1.5, 1.0, 1.0], 0.1, 0.1)


def test_window_average_of_a_ramp():
    t = [0.5 * k for k in range(21)]
    avg = qsync.window_average(t, t, 2.0)
    assert avg == pytest.approx([x + 1.0 for x in t[: len(avg)]])


def test_simulation_is_reproducible():
    a = qsync.simulate(SHORT, seed=3)
    b = qsync.simulate(SHORT, seed=3)
    assert a["failure"] is None
    assert a["columns"]["t"][-1] == pytest.approx(20.0)
    assert len(a["columns"]["t"]) == 41
    for name, col in a["columns"].items():
        assert np.array_equal(col, b["columns"][name]), name
    assert a["summary"]["completed"] is True
    c = qsync.simulate(SHORT, seed=4)
    assert not np.array_equal(a["columns"]["reB_0"], c["columns"]["reB_0"])


def test_shipped_config_runs():
    out = qsync.simulate_file(CONFIGS / "fig2.cfg", t_end=5)
    assert "fid_0_1" in out["columns"]
    assert out["pairs"] == [(0, 1)]


def test_config_errors():
    with pytest.raises(qsync.ConfigError, match="scenario"):
        qsync.simulate("")
    with pytest.raises(qsync.ConfigError, match="dt must be positive"):
        qsync.simulate(SHORT + "dt = -1\n")
