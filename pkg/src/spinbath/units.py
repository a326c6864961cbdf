"""Conversion of simulation units to platform temperatures and wall times."""

from __future__ import annotations

from dataclasses import dataclass

from scipy.constants import h as PLANCK
from scipy.constants import k as BOLTZMANN

# Convention: the system-ancilla coupling and ancilla damping are a tenth of
# the strongest achievable spin-spin coupling on the platform.
DEFAULT_G_RATIO = 10.0


@dataclass(frozen=True)
class PlatformSpec:
    """An experimental platform, characterized by its maximum spin-spin
    coupling strength in Hz."""

    name: str
    j_max_hz: float

    def __post_init__(self):
        if self.j_max_hz <= 0:
            raise ValueError("j_max_hz must be > 0")


PLATFORMS = {
    "trapped_ions": PlatformSpec("trapped_ions", 10e3),
    "superconducting": PlatformSpec("superconducting", 4e6),
    "neutral_atoms": PlatformSpec("neutral_atoms", 2e6),
}


def platform_units(platform, beta, sim_duration, g_ratio=DEFAULT_G_RATIO):
    """Physical target temperature and protocol wall time.

    ``sim_duration`` is the simulated protocol length in units of 1/g.
    Returns ``(temperature_K, wall_time_s)`` with T = h J_max / (k_B beta)
    and wall time = sim_duration / g, g = J_max / g_ratio in Hz.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    temperature = PLANCK * platform.j_max_hz / (BOLTZMANN * beta)
    g_hz = platform.j_max_hz / g_ratio
    return temperature, sim_duration / g_hz
