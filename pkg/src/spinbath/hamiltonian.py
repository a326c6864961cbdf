"""Pauli-string spin Hamiltonians and their exact diagonalization.

Conventions used throughout the package:

* the computational basis satisfies ``sigma_z |0> = +|0>``,
* site 0 is the leftmost tensor factor,
* energies are in units of the principal coupling J = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PAULI = {
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

HERMITICITY_TOL = 1e-10
DEFAULT_DEGENERACY_TOL = 1e-9


def pauli_string(num_sites, factors):
    """Dense matrix of a product of single-site Paulis on ``num_sites`` spins."""
    op = np.array([[1.0 + 0.0j]])
    per_site = {site: PAULI[axis] for site, axis in factors}
    for site in range(num_sites):
        op = np.kron(op, per_site.get(site, np.eye(2, dtype=complex)))
    return op


@dataclass(frozen=True)
class PauliTerm:
    """A weighted Pauli string, e.g. ``PauliTerm(0.8, ((0, "X"), (1, "X")))``."""

    coefficient: float
    factors: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "factors", tuple((int(s), str(a).upper()) for s, a in self.factors)
        )
        if not np.isfinite(self.coefficient):
            raise ValueError("PauliTerm coefficient must be finite")
        sites = [s for s, _ in self.factors]
        if len(set(sites)) != len(sites):
            raise ValueError("PauliTerm has a repeated site index")
        for site, axis in self.factors:
            if site < 0:
                raise ValueError(f"negative site index {site}")
            if axis not in PAULI:
                raise ValueError(f"unknown Pauli axis {axis!r}")


@dataclass(frozen=True)
class HamiltonianSpec:
    """Symbolic spin Hamiltonian as a sum of weighted Pauli strings."""

    num_sites: int
    terms: tuple

    def __post_init__(self):
        if self.num_sites < 1:
            raise ValueError("need at least one site")
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            for site, _ in term.factors:
                if site >= self.num_sites:
                    raise ValueError(
                        f"site {site} out of range for {self.num_sites} sites"
                    )

    @property
    def dim(self):
        return 2**self.num_sites

    def matrix(self):
        """Dense 2^L x 2^L realization."""
        h = np.zeros((self.dim, self.dim), dtype=complex)
        for term in self.terms:
            h += term.coefficient * pauli_string(self.num_sites, term.factors)
        return h


def build_two_spin(A, B):
    """Two-spin model -0.7 sz1 - B sz2 + sz1 sz2 + A (sx1 sx2 + sy1 sy2)."""
    terms = (
        PauliTerm(-0.7, ((0, "Z"),)),
        PauliTerm(-float(B), ((1, "Z"),)),
        PauliTerm(1.0, ((0, "Z"), (1, "Z"))),
        PauliTerm(float(A), ((0, "X"), (1, "X"))),
        PauliTerm(float(A), ((0, "Y"), (1, "Y"))),
    )
    return HamiltonianSpec(2, terms)


def build_chain(L, A, B, J):
    """Open chain with alternating onsite energies and XXZ-type nearest-neighbor
    couplings: even sites carry B sz, odd sites B/2 sz, bonds carry
    J [A (sx sx + sy sy) + sz sz]."""
    if L < 2:
        raise ValueError("chain needs L >= 2 sites")
    terms = []
    for i in range(L):
        onsite = B if i % 2 == 0 else B / 2.0
        terms.append(PauliTerm(float(onsite), ((i, "Z"),)))
    for i in range(L - 1):
        terms.append(PauliTerm(float(J * A), ((i, "X"), (i + 1, "X"))))
        terms.append(PauliTerm(float(J * A), ((i, "Y"), (i + 1, "Y"))))
        terms.append(PauliTerm(float(J), ((i, "Z"), (i + 1, "Z"))))
    return HamiltonianSpec(L, tuple(terms))


def build_single_spin(h):
    """Single spin with H = h sz."""
    return HamiltonianSpec(1, (PauliTerm(float(h), ((0, "Z"),)),))


@dataclass(frozen=True)
class EigenSystem:
    """Full eigendecomposition of a spin Hamiltonian.

    Attributes
    ----------
    energies : ascending eigenvalues.
    vectors : unitary whose columns are the eigenvectors (same ordering).
    degeneracy_groups : tuple of index tuples, grouped within ``tol``.
    gaps : distinct positive transition frequencies, deduplicated within ``tol``.
    delta_max : spectral width max(e) - min(e).
    """

    energies: np.ndarray
    vectors: np.ndarray
    degeneracy_groups: tuple
    gaps: np.ndarray
    delta_max: float
    tol: float

    @property
    def dim(self):
        return len(self.energies)

    @property
    def num_sites(self):
        return int(round(np.log2(self.dim)))

    def group_energies(self):
        """Representative (mean) energy of each degeneracy group."""
        return np.array(
            [float(np.mean(self.energies[list(g)])) for g in self.degeneracy_groups]
        )

    def projector(self, group):
        """Projector onto one degeneracy group, in the eigenbasis."""
        p = np.zeros((self.dim, self.dim), dtype=complex)
        for i in self.degeneracy_groups[group]:
            p[i, i] = 1.0
        return p


def _cluster(values, tol):
    """Group sorted values into runs whose consecutive spacing is <= tol."""
    groups = []
    current = [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            current.append(i)
        else:
            groups.append(tuple(current))
            current = [i]
    groups.append(tuple(current))
    return tuple(groups)


def diagonalize(spec, tol_deg=DEFAULT_DEGENERACY_TOL):
    """Hermitian eigendecomposition with degeneracy grouping and a deduplicated
    transition-frequency list (tol_gap = tol_deg)."""
    h = spec.matrix()
    asymmetry = np.max(np.abs(h - h.conj().T))
    if asymmetry > HERMITICITY_TOL:
        raise ValueError(f"Hamiltonian is not Hermitian (asymmetry {asymmetry:.2e})")
    energies, vectors = np.linalg.eigh(h)
    groups = _cluster(energies, tol_deg)
    reps = np.array([float(np.mean(energies[list(g)])) for g in groups])
    diffs = sorted(
        reps[j] - reps[i] for i in range(len(reps)) for j in range(i + 1, len(reps))
    )
    if diffs:
        clustered = _cluster(np.asarray(diffs), tol_deg)
        gaps = np.array([float(np.mean([diffs[i] for i in c])) for c in clustered])
    else:
        gaps = np.array([])
    return EigenSystem(
        energies=energies,
        vectors=vectors,
        degeneracy_groups=groups,
        gaps=gaps,
        delta_max=float(energies[-1] - energies[0]),
        tol=float(tol_deg),
    )
