"""Trotterized propagation, one-cycle maps, steady states and distance metrics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .generator import GeneratorAssembler, unvec, vec

TRACE_TOL = 1e-8
UNIQUENESS_GAP = 1e-10
STEP_WARN = 0.1

# Per-cycle exponential cache is only kept for small systems.
_CACHE_DIM_LIMIT = 4


class NonUniqueSteadyStateError(RuntimeError):
    """The one-cycle map has a degenerate fixed point (broken ergodicity)."""


@dataclass(frozen=True)
class CycleMap:
    """First-order Trotter product of the generator over one sweep period."""

    matrix: np.ndarray
    t_cycle: float
    dt: float


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    populations: np.ndarray
    coherence_norms: np.ndarray
    trace_distances: np.ndarray
    final_state: np.ndarray


def _assembler(ops):
    return ops if isinstance(ops, GeneratorAssembler) else GeneratorAssembler(ops)


def thermal_state(eig, beta):
    """Gibbs state exp(-beta H)/Z, diagonal in the eigenbasis; weights are
    computed relative to the ground-state energy so large beta cannot overflow."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    weights = np.exp(-beta * (eig.energies - eig.energies[0]))
    return np.diag(weights / weights.sum()).astype(complex)


def trace_distance(rho, sigma):
    """Half the sum of singular values of rho - sigma."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError("dimension mismatch")
    return 0.5 * float(np.sum(np.linalg.svd(rho - sigma, compute_uv=False)))


def cycle_map(ops, sched, dt):
    """V = prod_i exp(dt M(i dt)), i = 1 .. T_cycle/dt, later factors on the
    left. T_cycle must be divisible by dt."""
    asm = _assembler(ops)
    n = int(round(sched.t_cycle / dt))
    if abs(n * dt - sched.t_cycle) > 1e-9:
        raise ValueError("t_cycle must be an integer multiple of dt")
    v = np.eye(asm.dim**2, dtype=complex)
    for i in range(1, n + 1):
        v = expm(dt * asm.matrix(sched, i * dt)) @ v
    return CycleMap(matrix=v, t_cycle=sched.t_cycle, dt=dt)


def _fixed_point_decomposition(cmap):
    """Eigendecomposition bookkeeping shared by steady_state and reports."""
    evals, evecs = np.linalg.eig(cmap.matrix)
    order = np.argsort(np.abs(evals - 1.0))
    fixed = evecs[:, order[0]]
    second_dist = float(np.abs(evals[order[1]] - 1.0))
    moduli = np.sort(np.abs(evals))[::-1]
    spectral_gap = float(1.0 - moduli[1])
    rho = unvec(fixed)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return rho, second_dist, spectral_gap


def steady_state(cmap):
    """Fixed point of the one-cycle map: the eigenvector with eigenvalue
    closest to 1, Hermitized and trace-normalized. Raises when the fixed point
    is degenerate."""
    rho, second_dist, _ = _fixed_point_decomposition(cmap)
    if second_dist < UNIQUENESS_GAP:
        raise NonUniqueSteadyStateError(
            f"second eigenvalue within {second_dist:.2e} of 1"
        )
    return rho


def cycle_spectral_gap(cmap):
    """1 minus the second-largest eigenvalue modulus of the cycle map."""
    _, _, gap = _fixed_point_decomposition(cmap)
    return gap


def evolve(
    rho0, ops, sched, t_final, dt, record_stride=1, reference=None, t0=0.0, cache=None
):
    """Propagate rho0 with left-endpoint Trotter steps exp(dt M(t_i)),
    t_i = t0 + i dt, recording every ``record_stride`` steps.

    ``reference`` (e.g. the thermal state) is used for the recorded trace
    distances; without it the distance column is NaN. A dict passed as
    ``cache`` is reused across calls to avoid re-exponentiating the periodic
    step generators.
    """
    asm = _assembler(ops)
    d = asm.dim
    n_steps = int(round((t_final - t0) / dt))
    probe = asm.matrix(sched, t0 + sched.t_cycle)
    step_size = dt * float(np.linalg.norm(probe, np.inf))
    if step_size > STEP_WARN:
        warnings.warn(
            f"dt * max generator rate = {step_size:.3g} exceeds {STEP_WARN}; "
            "Trotter error may dominate",
            stacklevel=2,
        )

    steps_per_cycle = int(round(sched.t_cycle / dt))
    cacheable = (
        d <= _CACHE_DIM_LIMIT
        and sched.profile == "sawtooth"
        and abs(steps_per_cycle * dt - sched.t_cycle) < 1e-9
    )
    if cache is None:
        cache = {}

    state = vec(np.asarray(rho0, dtype=complex))
    times = []
    pops = []
    cohs = []
    dists = []

    def record(i):
        rho = unvec(state)
        times.append(t0 + i * dt)
        pops.append(np.real(np.diag(rho)).copy())
        off = rho - np.diag(np.diag(rho))
        cohs.append(float(np.linalg.norm(off)))
        dists.append(
            trace_distance(rho, reference) if reference is not None else np.nan
        )

    record(0)
    for i in range(n_steps):
        t_i = t0 + i * dt
        if cacheable:
            key = int(round((t_i % sched.t_cycle) / dt)) % steps_per_cycle
            e = cache.get(key)
            if e is None:
                e = expm(dt * asm.matrix(sched, t_i))
                cache[key] = e
        else:
            e = expm(dt * asm.matrix(sched, t_i))
        state = e @ state
        if (i + 1) % record_stride == 0 or i + 1 == n_steps:
            record(i + 1)

    return Trajectory(
        times=np.array(times),
        populations=np.array(pops),
        coherence_norms=np.array(cohs),
        trace_distances=np.array(dists),
        final_state=unvec(state),
    )


def choi_matrix(superop):
    """Choi matrix of a column-stacking superoperator; completely positive maps
    have a positive semidefinite Choi matrix."""
    d2 = superop.shape[0]
    d = int(round(np.sqrt(d2)))
    s4 = superop.reshape(d, d, d, d, order="F")  # [k, l, i, j] = E(|i><j|)[k, l]
    return s4.transpose(2, 0, 3, 1).reshape(d2, d2)
