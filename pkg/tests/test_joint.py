import numpy as np
import pytest

from spinbath import (
    BathSchedule,
    CouplingSpec,
    JointModel,
    build_single_spin,
    build_two_spin,
    trace_distance,
    validate_reduction,
)
from spinbath.joint import (
    ancilla_gibbs,
    default_step,
    dissipator,
    joint_rhs,
    rk4_step,
    system_marginal,
)


def make_model(g=0.05, beta=1.0, gamma=0.1, omega=4.0):
    sched = BathSchedule(
        beta=beta, gamma=gamma, omega_max=omega, t_cycle=100.0, profile="static"
    )
    spec = build_single_spin(2.0)
    return JointModel(
        system=spec, couplings=(CouplingSpec(0, 0, "X", g),), schedule=sched
    )


def test_dimensions():
    model = make_model()
    assert model.dim == 4
    h = model.hamiltonian(0.0)
    assert h.shape == (4, 4)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-14)


def test_hamiltonian_structure():
    model = make_model(g=0.05, omega=4.0)
    h = model.hamiltonian(0.0)
    sz = np.diag([1.0, -1.0]).astype(complex)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    expected = (
        np.kron(2.0 * sz, np.eye(2))
        - 2.0 * np.kron(np.eye(2), sz)
        + 0.05 * np.kron(sx, sx)
    )
    np.testing.assert_allclose(h, expected, atol=1e-14)


def test_pumping_rates_target_gibbs():
    model = make_model(g=0.0, beta=1.0, omega=4.0)
    rho_anc = ancilla_gibbs(1.0, 4.0)
    pairs = model.jump_operators(0.0)
    # decay dominates excitation by the Boltzmann factor
    assert pairs[0][0] / pairs[1][0] == pytest.approx(np.exp(4.0))
    # with g = 0 the ancilla Gibbs state is stationary
    big = np.kron(np.diag([0.6, 0.4]).astype(complex), rho_anc)
    drho = joint_rhs(model, 0.0, big)
    assert np.max(np.abs(drho)) < 1e-14


def test_ancilla_relaxes_to_gibbs():
    model = make_model(g=0.0, beta=1.0, gamma=0.5, omega=2.0)
    big = np.kron(
        np.diag([1.0, 0.0]).astype(complex),
        np.diag([0.0, 1.0]).astype(complex),  # start in the excited state
    )
    for _ in range(2000):
        big = rk4_step(model, 0.0, big, 0.02)
    anc = np.trace(big.reshape(2, 2, 2, 2), axis1=0, axis2=2)
    assert trace_distance(anc, ancilla_gibbs(1.0, 2.0)) < 1e-6


def test_marginal_of_product_state():
    rho_sys = np.diag([0.7, 0.3]).astype(complex)
    big = np.kron(rho_sys, ancilla_gibbs(2.0, 1.0))
    model = make_model()
    np.testing.assert_allclose(system_marginal(model, big), rho_sys, atol=1e-14)


def test_rhs_traceless():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    model = make_model()
    assert abs(np.trace(joint_rhs(model, 0.0, rho))) < 1e-13


def test_dissipator_definition():
    op = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    rho = np.diag([0.0, 1.0]).astype(complex)
    np.testing.assert_allclose(
        dissipator(op, rho), np.diag([1.0, -1.0]), atol=1e-14
    )


def test_default_step():
    assert default_step(0.1, 2.0) == pytest.approx(0.01)
    assert default_step(100.0, 2.0) == pytest.approx(1e-3)
    assert default_step(0.1, 100.0) == pytest.approx(1e-3)


def test_validate_reduction_short_run():
    report = validate_reduction(
        build_single_spin(2.0),
        CouplingSpec(0, 0, "X", 0.05),
        beta=1.0,
        gamma=0.1,
        omega_static=4.0,
        t_final=20.0,
    )
    assert report["warnings"] == []
    assert report["regime_ratios"]["g_over_gamma"] == pytest.approx(0.5)
    assert 0.0 < report["max_deviation"] < 0.5
    assert len(report["times"]) == len(report["deviation"])
    assert report["deviation"][0] == pytest.approx(0.0, abs=1e-12)


def test_validate_reduction_flags_regime_violation():
    report = validate_reduction(
        build_single_spin(2.0),
        CouplingSpec(0, 0, "X", 0.5),
        beta=1.0,
        gamma=0.1,
        omega_static=4.0,
        t_final=5.0,
    )
    assert any("g > Gamma" in w for w in report["warnings"])


def test_two_spin_joint_model_builds():
    sched = BathSchedule(
        beta=1.0, gamma=0.1, omega_max=2.0, t_cycle=10.0, profile="static"
    )
    model = JointModel(
        system=build_two_spin(0.8, 0.5),
        couplings=(
            CouplingSpec(0, 0, "X", 0.1),
            CouplingSpec(1, 1, "X", 0.1),
        ),
        schedule=sched,
    )
    assert model.dim == 16
    h = model.hamiltonian(3.0)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-13)
    assert len(model.jump_operators(0.0)) == 4
