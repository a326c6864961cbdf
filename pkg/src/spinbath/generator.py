"""Time-dependent Lindblad generator, as a superoperator matrix and as a
direct right-hand-side action, plus the decoupled population/coherence rates.

Everything is expressed in the energy eigenbasis and vectorization stacks
columns, so vec(A rho B) = (B^T kron A) vec(rho).
"""

from __future__ import annotations

import numpy as np

from .bath import spectral_density

STATE_TOL = 1e-10
MIN_EIG_TOL = -1e-8


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v):
    d = int(round(np.sqrt(len(v))))
    return np.asarray(v).reshape(d, d, order="F")


def state_defects(rho):
    """(hermiticity defect, trace defect, minimum eigenvalue) of a candidate
    density matrix."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    return herm, trace, min_eig


def check_state(rho, herm_tol=STATE_TOL, trace_tol=STATE_TOL, eig_tol=MIN_EIG_TOL):
    herm, trace, min_eig = state_defects(rho)
    if herm > herm_tol:
        raise ValueError(f"state not Hermitian (defect {herm:.2e})")
    if trace > trace_tol:
        raise ValueError(f"state trace deviates from 1 by {trace:.2e}")
    if min_eig < eig_tol:
        raise ValueError(f"state has negative eigenvalue {min_eig:.2e}")


class GeneratorAssembler:
    """Precomputed frequency-resolved superoperator pieces.

    The generator at any time is a positive combination of fixed matrices, one
    per distinct signed transition frequency, weighted by the instantaneous
    spectral density. Pieces are summed over couplings (with their g^2) up
    front, so assembly per time step is a single tensordot.
    """

    def __init__(self, ops_list):
        if not ops_list:
            raise ValueError("need at least one coupling")
        d = ops_list[0].dim
        for fro in ops_list:
            if fro.dim != d:
                raise ValueError("couplings have mismatched dimensions")
        self.dim = d
        eye = np.eye(d, dtype=complex)
        pieces = {}
        for fro in ops_list:
            g2 = fro.coupling.strength**2
            for w, x in fro.ops.items():
                xdx = x.conj().T @ x
                piece = g2 * (
                    np.kron(x.conj(), x)
                    - 0.5 * np.kron(eye, xdx)
                    - 0.5 * np.kron(xdx.T, eye)
                )
                if w in pieces:
                    pieces[w] += piece
                else:
                    pieces[w] = piece
        self.frequencies = np.array(sorted(pieces))
        self.pieces = np.stack([pieces[w] for w in self.frequencies])

    def matrix_from_rates(self, rate_fn):
        lam = np.array([rate_fn(w) for w in self.frequencies])
        return np.tensordot(lam, self.pieces, axes=1)

    def matrix(self, sched, t):
        return self.matrix_from_rates(lambda w: spectral_density(sched, t, w))


def build_generator(ops_list, sched, t):
    """Superoperator matrix M(t) acting on column-stacked density matrices."""
    return GeneratorAssembler(ops_list).matrix(sched, t)


def apply_rhs_from_rates(ops_list, rate_fn, rho):
    """d rho / dt for arbitrary transition rates, evaluated directly."""
    out = np.zeros_like(rho, dtype=complex)
    for fro in ops_list:
        g2 = fro.coupling.strength**2
        for w, x in fro.ops.items():
            lam = g2 * rate_fn(w)
            xdx = x.conj().T @ x
            out += lam * (x @ rho @ x.conj().T - 0.5 * (xdx @ rho + rho @ xdx))
    return out


def apply_rhs(ops_list, sched, t, rho):
    """d rho / dt under the engineered bath; equals unvec(M(t) vec(rho))."""
    return apply_rhs_from_rates(
        ops_list, lambda w: spectral_density(sched, t, w), rho
    )


def detailed_balance_rates(sched, t, beta=None):
    """Synthetic rate function that satisfies lambda(-w) = lambda(w) e^{-beta w}
    exactly, built from the engineered downward rates. The thermal state at
    ``beta`` is then an exact fixed point of the resulting generator."""
    if beta is None:
        beta = sched.beta

    def rate(w):
        if w >= 0:
            return spectral_density(sched, t, w)
        return spectral_density(sched, t, -w) * np.exp(beta * w)

    return rate


def _require_nondegenerate(eig):
    if any(len(g) > 1 for g in eig.degeneracy_groups):
        raise ValueError("rate-equation path requires a nondegenerate spectrum")
    diffs = []
    e = eig.energies
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            diffs.append(e[j] - e[i])
    diffs = np.sort(np.asarray(diffs))
    if np.any(np.diff(diffs) <= eig.tol):
        raise ValueError("rate-equation path requires nondegenerate gaps")


def population_rates(ops_list, eig, sched, t):
    """Classical rate matrix and coherence decay rates at time t.

    Returns ``(q, c)`` where ``q`` is the d x d population generator
    (``dP/dt = q P``; ``q[i, j]`` for i != j is the transition rate j -> i)
    and ``c[i, j]`` is the exponential decay rate of the coherence between
    eigenstates i and j. Only valid for nondegenerate energies and gaps.
    """
    _require_nondegenerate(eig)
    d = eig.dim
    e = eig.energies
    r = np.zeros((d, d))
    for fro in ops_list:
        g2 = fro.coupling.strength**2
        for w, x in fro.ops.items():
            lam = g2 * spectral_density(sched, t, w)
            r += lam * np.abs(x) ** 2
    np.fill_diagonal(r, 0.0)
    q = r - np.diag(r.sum(axis=0))
    gamma_total = r.sum(axis=0)  # total leave rate of each eigenstate
    c = 0.5 * (gamma_total[:, None] + gamma_total[None, :])
    np.fill_diagonal(c, 0.0)
    return q, c
