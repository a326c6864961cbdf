import numpy as np
import pytest

from spinbath import (
    BathSchedule,
    CouplingSpec,
    GeneratorAssembler,
    build_two_spin,
    diagonalize,
    frequency_resolve,
)


@pytest.fixture(autouse=True)
def _quiet_sweep_warning():
    """The headline operating point deliberately runs a fast sweep; silence the
    advisory so unit tests stay readable."""
    import warnings

    from spinbath import QuasiStaticWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuasiStaticWarning)
        yield


@pytest.fixture
def two_spin_model():
    """Standard two-spin model with both ancillas and the usual bath."""
    spec = build_two_spin(0.8, 0.5)
    eig = diagonalize(spec)
    ops = [
        frequency_resolve(eig, CouplingSpec(0, 0, "X", 0.1)),
        frequency_resolve(eig, CouplingSpec(1, 1, "X", 0.1)),
    ]
    sched = BathSchedule(
        beta=1.0, gamma=0.1, omega_max=1.2 * eig.delta_max, t_cycle=40.0
    )
    return spec, eig, ops, sched


@pytest.fixture
def two_spin_assembler(two_spin_model):
    spec, eig, ops, sched = two_spin_model
    return spec, eig, ops, sched, GeneratorAssembler(ops)


def random_state(rng, d):
    """Random full-rank density matrix."""
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)
