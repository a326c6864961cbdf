"""Ancilla sweep schedules, engineered spectral density and detailed balance."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

SWEEP_RATIO_WARN = 0.1


class QuasiStaticWarning(UserWarning):
    """Sweep too fast relative to the ancilla damping rate."""


@dataclass(frozen=True)
class BathSchedule:
    """Shared per-ancilla sweep profile and bath parameters.

    ``profile`` is "sawtooth" (periodic linear ramp 0 -> omega_max) or
    "static" (constant omega_max, used by the joint-model oracle).
    """

    beta: float
    gamma: float
    omega_max: float
    t_cycle: float
    profile: str = "sawtooth"
    sweep_ratio: float = field(init=False)

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.omega_max <= 0:
            raise ValueError("omega_max must be > 0")
        if self.t_cycle <= 0:
            raise ValueError("t_cycle must be > 0")
        if self.profile not in ("sawtooth", "static"):
            raise ValueError(f"unknown sweep profile {self.profile!r}")
        ratio = 0.0
        if self.profile == "sawtooth":
            ratio = self.omega_max / self.t_cycle / self.gamma
        object.__setattr__(self, "sweep_ratio", float(ratio))
        if ratio > SWEEP_RATIO_WARN:
            warnings.warn(
                f"sweep rate / damping ratio {ratio:.3g} exceeds "
                f"{SWEEP_RATIO_WARN}; quasi-static assumption is strained",
                QuasiStaticWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class RatePair:
    """Ancilla pumping rates, gamma_plus (excitation) and gamma_minus (decay)."""

    gamma_plus: float
    gamma_minus: float


def omega_at(sched, t):
    """Instantaneous ancilla splitting at time t."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if sched.profile == "static":
        return sched.omega_max
    return (t % sched.t_cycle) / sched.t_cycle * sched.omega_max


def boltzmann_population(beta, omega):
    """Ground-state Gibbs population of a two-level system with splitting omega.

    Stable for beta * omega up to at least 1e4.
    """
    if omega < 0:
        raise ValueError("omega must be >= 0")
    return 1.0 / (1.0 + math.exp(-beta * omega))


def spectral_density(sched, t, omega):
    """Engineered transition-rate profile: a Lorentzian pair at +/- Omega(t)
    weighted by the instantaneous ancilla Gibbs populations. Strictly positive."""
    omega_t = omega_at(sched, t)
    p = boltzmann_population(sched.beta, omega_t)
    half = sched.gamma / 2.0
    return p * half / (half**2 + (omega - omega_t) ** 2) + (1.0 - p) * half / (
        half**2 + (omega + omega_t) ** 2
    )


def pumping_rates(sched, t):
    """Excitation/decay rates with fixed sum Gamma and ratio e^{beta Omega(t)}."""
    p = boltzmann_population(sched.beta, omega_at(sched, t))
    return RatePair(gamma_plus=sched.gamma * (1.0 - p), gamma_minus=sched.gamma * p)


def db_violation(sched, t, omega):
    """Detailed-balance violation of the engineered rates at frequency omega > 0.

    This is the total variation distance between the Boltzmann populations of a
    two-state system with gap omega and the equilibrium the rates actually
    produce; always in [0, 1].
    """
    if omega <= 0:
        raise ValueError("omega must be > 0")
    lam_down = spectral_density(sched, t, omega)
    lam_up = spectral_density(sched, t, -omega)
    w = math.exp(-sched.beta * omega)
    return abs(lam_up - lam_down * w) / ((lam_down + lam_up) * (1.0 + w))


def db_violation_closed_form(beta, gamma, omega_anc, omega):
    """Explicit formula for the detailed-balance violation.

    The sinh/cosh ratio reduces algebraically to

        | tanh(beta w / 2) / 2 - 4 w W tanh(beta W / 2) / (G^2 + 4(w^2 + W^2)) |

    which is evaluated directly: tanh saturates, so there is no overflow at any
    beta, unlike the raw exponential form.
    """
    if omega <= 0:
        raise ValueError("omega must be > 0")
    if omega_anc <= 0:
        raise ValueError("omega_anc must be > 0")
    denom = gamma**2 + 4.0 * (omega**2 + omega_anc**2)
    return abs(
        0.5 * math.tanh(0.5 * beta * omega)
        - 4.0 * omega * omega_anc * math.tanh(0.5 * beta * omega_anc) / denom
    )


def db_violation_zero_temperature(gamma, omega_anc, omega):
    """beta -> infinity limit of the violation metric."""
    return 0.5 - 4.0 * omega * omega_anc / (gamma**2 + 4.0 * (omega**2 + omega_anc**2))
