"""Scenario configuration: flat key-value files, validation, and presets."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np
import yaml

RUN_KINDS = (
    "trajectory",
    "steady_state",
    "sweep_grid",
    "chain_scaling",
    "rates_plot",
    "oracle",
)

HAMILTONIAN_KINDS = ("two_spin", "chain", "single_spin")


class ConfigError(ValueError):
    """Configuration failed validation; message lists the offending fields."""


@dataclass
class ScenarioConfig:
    kind: str
    hamiltonian: str = "two_spin"
    # Hamiltonian parameters
    A: float = 0.8
    B: float = 0.5
    J: float = 1.0
    L: int = 2
    h_field: float = 2.0  # single_spin only
    # couplings: one ancilla per listed site, all with the same axis/strength
    coupling_sites: list = field(default_factory=lambda: [0, 1])
    coupling_axis: str = "X"
    g: float = 0.1
    # bath
    beta: float = 1.0
    gamma: float = 0.1
    omega_max: float | None = None  # None -> 1.2 * delta_max from the spectrum
    t_cycle: float | None = None  # None -> 4 / gamma
    dt: float = 0.01
    # run control
    initial_state: str = "01"
    record_stride: int = 25
    max_cycles: int = 80
    target_distance: float = 0.01
    tol_deg: float = 1e-9
    seed: int = 0
    figures: bool = True
    # sweep grids
    beta_grid: list = field(default_factory=list)
    gamma_grid: list = field(default_factory=list)
    a_grid: list = field(default_factory=list)
    b_grid: list = field(default_factory=list)
    l_grid: list = field(default_factory=list)
    omega_grid: list = field(default_factory=list)
    omega_fixed: float = 8.0
    # oracle
    oracle_g_values: list = field(default_factory=lambda: [0.05, 0.02, 0.01])
    oracle_omega: float = 4.0
    oracle_t_final: float = 1000.0
    # output
    out_prefix: str = "run"

    def validated(self):
        errors = []
        if self.kind not in RUN_KINDS:
            errors.append(f"kind: must be one of {RUN_KINDS}, got {self.kind!r}")
        if self.hamiltonian not in HAMILTONIAN_KINDS:
            errors.append(
                f"hamiltonian: must be one of {HAMILTONIAN_KINDS}, "
                f"got {self.hamiltonian!r}"
            )
        if self.beta <= 0:
            errors.append("beta: must be > 0")
        if self.gamma <= 0:
            errors.append("gamma: must be > 0")
        if self.g < 0:
            errors.append("g: must be >= 0")
        if self.dt <= 0:
            errors.append("dt: must be > 0")
        if self.hamiltonian == "chain" and self.L < 2:
            errors.append("L: chain needs L >= 2")
        if not self.coupling_sites:
            errors.append("coupling_sites: must be nonempty")
        if self.kind == "sweep_grid":
            gb = bool(self.gamma_grid) and bool(self.beta_grid)
            ab = bool(self.a_grid) and bool(self.b_grid)
            if not (gb or ab):
                errors.append(
                    "sweep_grid: needs gamma_grid+beta_grid or a_grid+b_grid"
                )
        if self.kind == "chain_scaling":
            if not self.l_grid or not self.beta_grid:
                errors.append("chain_scaling: needs l_grid and beta_grid")
            if any(l > 4 for l in self.l_grid):
                errors.append(
                    "l_grid: L > 4 rejected; the dense generator takes "
                    "O(M * N_omega * 2^(4L)) bytes and grows out of desk scale"
                )
            if any(l < 2 for l in self.l_grid):
                errors.append("l_grid: chain needs L >= 2")
        if self.kind == "rates_plot":
            if not self.beta_grid:
                errors.append("rates_plot: needs beta_grid")
            if self.omega_fixed <= 0:
                errors.append("omega_fixed: must be > 0")
        if self.kind == "oracle" and not self.oracle_g_values:
            errors.append("oracle: needs oracle_g_values")
        if errors:
            raise ConfigError("; ".join(errors))
        return self


_FIELD_NAMES = {f.name for f in fields(ScenarioConfig)}


def config_from_dict(data):
    unknown = sorted(set(data) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "kind" not in data:
        raise ConfigError("kind: required")
    return ScenarioConfig(**data).validated()


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must be a flat key-value mapping")
    return config_from_dict(data)


def config_to_dict(cfg):
    out = {}
    for f in fields(ScenarioConfig):
        value = getattr(cfg, f.name)
        if isinstance(value, np.ndarray):
            value = value.tolist()
        out[f.name] = value
    return out


def _fig2(beta):
    return {
        "kind": "trajectory",
        "hamiltonian": "two_spin",
        "A": 0.8,
        "B": 0.5,
        "coupling_sites": [0, 1],
        "g": 0.1,
        "beta": beta,
        "gamma": 0.1,
        "t_cycle": 40.0,
        "dt": 0.01,
        "initial_state": "01",
        "record_stride": 25,
        "max_cycles": 80,
        "target_distance": 0.01,
    }


PRESETS = {
    # Time traces of eigenstate populations and thermal-state distance.
    "fig2a": _fig2(1.0),
    "fig2b": _fig2(5.0),
    # Steady-state quality over bath parameters, g = Gamma, T_cycle = 4/Gamma.
    "fig3": {
        "kind": "sweep_grid",
        "hamiltonian": "two_spin",
        "A": 0.8,
        "B": 0.5,
        "gamma_grid": np.geomspace(0.02, 0.2, 8).tolist(),
        "beta_grid": np.geomspace(0.1, 5.0, 8).tolist(),
        "dt": 0.01,
    },
    # Steady-state quality over Hamiltonian parameters at fixed bath.
    "fig5_beta1": {
        "kind": "sweep_grid",
        "hamiltonian": "two_spin",
        "beta": 1.0,
        "gamma": 0.1,
        "g": 0.1,
        "t_cycle": 40.0,
        "a_grid": np.linspace(0.05, 1.0, 8).tolist(),
        "b_grid": np.linspace(0.4, 2.0, 8).tolist(),
        "dt": 0.01,
    },
    "fig5_beta5": None,  # filled below
    # Chain-length scaling with ancillas on alternating sites.
    "fig6": {
        "kind": "chain_scaling",
        "hamiltonian": "chain",
        "A": 0.8,
        "B": 1.0,
        "J": 1.0,
        "gamma": 0.1,
        "g": 0.1,
        "t_cycle": 40.0,
        "l_grid": [2, 3, 4],
        "beta_grid": [0.1, 1.0, 5.0],
        "dt": 0.01,
    },
    # Engineered rates and their detailed-balance violation vs frequency.
    "fig1b": {
        "kind": "rates_plot",
        "omega_fixed": 8.0,
        "gamma": 0.1,
        "beta_grid": [1.0, 5.0],
        "omega_grid": np.linspace(0.05, 10.0, 200).tolist(),
    },
    # Joint-model validation of the reduced equation at a static resonance.
    "oracle1": {
        "kind": "oracle",
        "hamiltonian": "single_spin",
        "h_field": 2.0,
        "coupling_sites": [0],
        "beta": 1.0,
        "gamma": 0.1,
        "oracle_omega": 4.0,
        "oracle_g_values": [0.05, 0.02, 0.01],
        "oracle_t_final": 1000.0,
    },
}
PRESETS["fig5_beta5"] = dict(PRESETS["fig5_beta1"], beta=5.0)


def preset(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    data = dict(PRESETS[name])
    data.setdefault("out_prefix", name)
    return config_from_dict(data)
