"""Engineered-bath thermalization of small spin systems.

Time-dependent Lindblad generators built from frequency-resolved coupling
operators and a swept, Lorentzian-filtered ancilla bath; Trotterized cycle
maps, steady states, a brute-force joint-model oracle, and a CLI for the
standard experiments.
"""

from .bath import (
    BathSchedule,
    QuasiStaticWarning,
    RatePair,
    boltzmann_population,
    db_violation,
    db_violation_closed_form,
    db_violation_zero_temperature,
    omega_at,
    pumping_rates,
    spectral_density,
)
from .config import (
    ConfigError,
    PRESETS,
    ScenarioConfig,
    config_from_dict,
    load_config,
    preset,
)
from .generator import (
    GeneratorAssembler,
    apply_rhs,
    build_generator,
    detailed_balance_rates,
    population_rates,
    unvec,
    vec,
)
from .hamiltonian import (
    EigenSystem,
    HamiltonianSpec,
    PauliTerm,
    build_chain,
    build_single_spin,
    build_two_spin,
    diagonalize,
    pauli_string,
)
from .joint import JointModel, validate_reduction
from .jump_ops import (
    CouplingSpec,
    FrequencyResolvedOps,
    check_ergodicity,
    frequency_resolve,
)
from .propagation import (
    CycleMap,
    NonUniqueSteadyStateError,
    Trajectory,
    choi_matrix,
    cycle_map,
    cycle_spectral_gap,
    evolve,
    steady_state,
    thermal_state,
    trace_distance,
)
from .units import PLATFORMS, PlatformSpec, platform_units

__all__ = [
    "BathSchedule",
    "QuasiStaticWarning",
    "RatePair",
    "boltzmann_population",
    "db_violation",
    "db_violation_closed_form",
    "db_violation_zero_temperature",
    "omega_at",
    "pumping_rates",
    "spectral_density",
    "ConfigError",
    "PRESETS",
    "ScenarioConfig",
    "config_from_dict",
    "load_config",
    "preset",
    "GeneratorAssembler",
    "apply_rhs",
    "build_generator",
    "detailed_balance_rates",
    "population_rates",
    "unvec",
    "vec",
    "EigenSystem",
    "HamiltonianSpec",
    "PauliTerm",
    "build_chain",
    "build_single_spin",
    "build_two_spin",
    "diagonalize",
    "pauli_string",
    "JointModel",
    "validate_reduction",
    "CouplingSpec",
    "FrequencyResolvedOps",
    "check_ergodicity",
    "frequency_resolve",
    "CycleMap",
    "NonUniqueSteadyStateError",
    "Trajectory",
    "choi_matrix",
    "cycle_map",
    "cycle_spectral_gap",
    "evolve",
    "steady_state",
    "thermal_state",
    "trace_distance",
    "PLATFORMS",
    "PlatformSpec",
    "platform_units",
]

__version__ = "0.1.0"
