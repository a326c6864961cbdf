import numpy as np
import pytest

from spinbath import (
    CouplingSpec,
    build_single_spin,
    build_two_spin,
    check_ergodicity,
    diagonalize,
    frequency_resolve,
)
from spinbath.hamiltonian import HamiltonianSpec, PauliTerm, pauli_string


def test_single_spin_components():
    eig = diagonalize(build_single_spin(2.0))
    fro = frequency_resolve(eig, CouplingSpec(0, 0, "X", 0.1))
    assert fro.frequencies() == [-4.0, 4.0]
    # X(omega)[i, j] is nonzero only when E_j - E_i = omega
    x = fro.ops[4.0]
    assert x[0, 1] != 0 and np.count_nonzero(x) == 1
    sigma_eig = (
        eig.vectors.conj().T @ pauli_string(1, ((0, "X"),)) @ eig.vectors
    )
    np.testing.assert_allclose(fro.total(), sigma_eig, atol=1e-13)


def test_sum_rule_and_adjoint_pairing(two_spin_model):
    _, eig, ops, _ = two_spin_model
    for fro in ops:
        sigma = pauli_string(2, ((fro.coupling.site, "X"),))
        sigma_eig = eig.vectors.conj().T @ sigma @ eig.vectors
        np.testing.assert_allclose(fro.total(), sigma_eig, atol=1e-12)
        for w, x in fro.ops.items():
            assert -w in fro.ops
            np.testing.assert_allclose(fro.ops[-w], x.conj().T, atol=1e-13)


def test_components_shift_energy(two_spin_model):
    _, eig, ops, _ = two_spin_model
    h = np.diag(eig.energies)
    for fro in ops:
        for w, x in fro.ops.items():
            np.testing.assert_allclose(h @ x - x @ h, -w * x, atol=1e-10)
            xdx = x.conj().T @ x
            np.testing.assert_allclose(
                h @ xdx - xdx @ h, np.zeros_like(h), atol=1e-10
            )


def test_two_spin_frequency_set(two_spin_model):
    _, eig, ops, _ = two_spin_model
    expected = [
        -4.812451549659710,
        -2.412451549659710,
        -1.587548450340290,
        -0.812451549659710,
        0.812451549659710,
        1.587548450340290,
        2.412451549659710,
        4.812451549659710,
    ]
    np.testing.assert_allclose(ops[0].frequencies(), expected, atol=1e-12)


def test_degenerate_binning():
    # sz sz only: degenerate pairs, X components bridge the two eigenspaces
    spec = HamiltonianSpec(2, (PauliTerm(1.0, ((0, "Z"), (1, "Z"))),))
    eig = diagonalize(spec)
    fro = frequency_resolve(eig, CouplingSpec(0, 0, "X", 0.1))
    assert set(fro.frequencies()) == {-2.0, 2.0}


def test_out_of_range_site():
    eig = diagonalize(build_single_spin(1.0))
    with pytest.raises(ValueError, match="out of range"):
        frequency_resolve(eig, CouplingSpec(0, 3, "X", 0.1))


def test_coupling_validation():
    with pytest.raises(ValueError):
        CouplingSpec(0, 0, "Q", 0.1)
    with pytest.raises(ValueError):
        CouplingSpec(0, -1, "X", 0.1)
    with pytest.raises(ValueError):
        CouplingSpec(0, 0, "X", -0.1)
    assert CouplingSpec(0, 0, "x", 0.1).axis == "X"


def test_ergodicity_standard_model(two_spin_model):
    _, _, ops, _ = two_spin_model
    ergodic, witness = check_ergodicity(ops)
    assert ergodic and witness is None


def test_ergodicity_single_coupling_two_spin():
    # one transverse ancilla on site 0 still connects all four eigenstates
    eig = diagonalize(build_two_spin(0.8, 0.5))
    ops = [frequency_resolve(eig, CouplingSpec(0, 0, "X", 0.1))]
    ergodic, _ = check_ergodicity(ops)
    assert ergodic


def test_non_ergodic_commuting_coupling():
    # sz coupling commutes with H = h sz: sz itself sits in the commutant
    eig = diagonalize(build_single_spin(2.0))
    ops = [frequency_resolve(eig, CouplingSpec(0, 0, "Z", 0.1))]
    ergodic, witness = check_ergodicity(ops)
    assert not ergodic
    assert witness is not None
    # the witness genuinely commutes with every stored operator and is not
    # a multiple of identity
    for x in ops[0].ops.values():
        np.testing.assert_allclose(
            witness @ x - x @ witness, np.zeros_like(x), atol=1e-8
        )
    off = witness - np.trace(witness) / 2 * np.eye(2)
    assert np.max(np.abs(off)) > 1e-3
