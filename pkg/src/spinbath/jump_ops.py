"""Frequency-resolved coupling operators and the ergodicity (commutant) check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import PAULI, pauli_string

# Matrix elements below this are zeroed before deciding whether an operator
# at a given frequency is present at all.
ELEMENT_TOL = 1e-13


@dataclass(frozen=True)
class CouplingSpec:
    """One ancilla coupling g * sigma_axis on a given system site."""

    index: int
    site: int
    axis: str
    strength: float

    def __post_init__(self):
        object.__setattr__(self, "axis", str(self.axis).upper())
        if self.axis not in PAULI:
            raise ValueError(f"unknown Pauli axis {self.axis!r}")
        if self.site < 0:
            raise ValueError("negative coupling site")
        if not (np.isfinite(self.strength) and self.strength >= 0):
            raise ValueError("coupling strength must be finite and >= 0")


@dataclass(frozen=True)
class FrequencyResolvedOps:
    """Map from signed transition frequency to the operator connecting the
    eigenspaces separated by that frequency, in the energy eigenbasis."""

    coupling: CouplingSpec
    ops: dict

    @property
    def dim(self):
        for x in self.ops.values():
            return x.shape[0]
        return 0

    def frequencies(self):
        return sorted(self.ops)

    def total(self):
        """Sum of all frequency components; reproduces the bare coupling
        operator in the eigenbasis."""
        out = None
        for x in self.ops.values():
            out = x.copy() if out is None else out + x
        return out


def frequency_resolve(eig, coupling):
    """Split the coupling operator into its transition-frequency components.

    For every signed frequency in the deduplicated gap list (and zero), the
    component is the sum of projected blocks P(e) sigma P(e') over eigenspace
    pairs with e' - e equal to that frequency within the grouping tolerance.
    All-zero components are dropped.
    """
    L = eig.num_sites
    if coupling.site >= L:
        raise ValueError(f"coupling site {coupling.site} out of range for L={L}")
    sigma = pauli_string(L, ((coupling.site, coupling.axis),))
    u = eig.vectors
    s_eig = u.conj().T @ sigma @ u

    reps = eig.group_energies()
    grid = np.concatenate([-eig.gaps[::-1], [0.0], eig.gaps])
    ops = {}
    for a, ga in enumerate(eig.degeneracy_groups):
        for b, gb in enumerate(eig.degeneracy_groups):
            raw = reps[b] - reps[a]
            key = float(grid[np.argmin(np.abs(grid - raw))])
            block = np.zeros_like(s_eig)
            block[np.ix_(ga, gb)] = s_eig[np.ix_(ga, gb)]
            if key in ops:
                ops[key] = ops[key] + block
            else:
                ops[key] = block
    cleaned = {}
    for w, x in ops.items():
        x = np.where(np.abs(x) < ELEMENT_TOL, 0.0, x)
        if np.any(x != 0):
            cleaned[w] = x
    return FrequencyResolvedOps(coupling=coupling, ops=cleaned)


def check_ergodicity(ops_list, tol=1e-10):
    """Decide whether only multiples of identity commute with every stored
    operator.

    Solves [K, X] = 0 over all operators as a linear system on vec(K) and
    checks that the null space is one-dimensional. Returns ``(True, None)``
    when ergodic, otherwise ``(False, witness)`` with a non-identity commutant
    element.
    """
    if not ops_list:
        raise ValueError("need at least one coupling")
    d = ops_list[0].dim
    eye = np.eye(d, dtype=complex)
    # Normal matrix of the stacked constraints vec([K, X]) = 0; its kernel is
    # the commutant. Accumulating C^H C keeps memory at d^2 x d^2.
    gram = np.zeros((d * d, d * d), dtype=complex)
    for fro in ops_list:
        for x in fro.ops.values():
            # vec(KX - XK) = (X^T kron I - I kron X) vec(K), column stacking
            c = np.kron(x.T, eye) - np.kron(eye, x)
            gram += c.conj().T @ c
    evals, evecs = np.linalg.eigh(gram)
    null_mask = evals < tol * max(evals[-1], 1.0)
    null_dim = int(np.sum(null_mask))
    if null_dim <= 1:
        return True, None
    # pick a null vector with its identity component removed
    basis = evecs[:, null_mask].T
    eye_vec = eye.reshape(-1, order="F") / np.sqrt(d)
    best = None
    best_norm = -1.0
    for v in basis:
        residual = v - eye_vec * (eye_vec.conj() @ v)
        if np.linalg.norm(residual) > best_norm:
            best_norm = float(np.linalg.norm(residual))
            best = residual
    witness = best.reshape(d, d, order="F")
    witness /= np.max(np.abs(witness))
    return False, witness
