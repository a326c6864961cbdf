"""Experiment drivers: trajectory, sweep, chain-scaling, rates and oracle runs.

Every run writes a CSV with a fixed, documented column order plus a JSON
run-report (config echo, regime ratios, ergodicity verdict, spectral gap,
wall time). Identical config and seed give byte-identical CSV output.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bath import BathSchedule, db_violation, spectral_density
from .config import config_to_dict
from .generator import GeneratorAssembler
from .hamiltonian import (
    build_chain,
    build_single_spin,
    build_two_spin,
    diagonalize,
)
from .jump_ops import CouplingSpec, check_ergodicity, frequency_resolve
from .joint import validate_reduction
from .propagation import (
    NonUniqueSteadyStateError,
    cycle_map,
    evolve,
    steady_state,
    thermal_state,
    trace_distance,
)

MAX_WORKERS = min(8, os.cpu_count() or 1)
OMEGA_MAX_FACTOR = 1.2
CONGESTION_GAMMA_FACTOR = 10.0


def fmt(x):
    """Deterministic float formatting for CSV cells."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def build_hamiltonian(cfg):
    if cfg.hamiltonian == "two_spin":
        return build_two_spin(cfg.A, cfg.B)
    if cfg.hamiltonian == "chain":
        return build_chain(cfg.L, cfg.A, cfg.B, cfg.J)
    return build_single_spin(cfg.h_field)


@dataclass
class ModelBundle:
    spec: object
    eig: object
    ops: list
    assembler: object
    sched: object


def snap_to_dt(t_cycle, dt):
    return max(1, int(round(t_cycle / dt))) * dt


def build_model(cfg, spec=None, beta=None, gamma=None, g=None):
    beta = cfg.beta if beta is None else beta
    gamma = cfg.gamma if gamma is None else gamma
    g = cfg.g if g is None else g
    if spec is None:
        spec = build_hamiltonian(cfg)
    eig = diagonalize(spec, cfg.tol_deg)
    ops = [
        frequency_resolve(eig, CouplingSpec(m, site, cfg.coupling_axis, g))
        for m, site in enumerate(cfg.coupling_sites)
    ]
    omega_max = cfg.omega_max
    if omega_max is None:
        omega_max = OMEGA_MAX_FACTOR * eig.delta_max
    t_cycle = cfg.t_cycle if cfg.t_cycle is not None else 4.0 / gamma
    sched = BathSchedule(
        beta=beta,
        gamma=gamma,
        omega_max=omega_max,
        t_cycle=snap_to_dt(t_cycle, cfg.dt),
    )
    return ModelBundle(spec, eig, ops, GeneratorAssembler(ops), sched)


def gap_iqr(eig, ops_list):
    """Interquartile range of the allowed positive transition frequencies
    (those with a nonzero frequency-resolved operator). None when fewer than
    two transitions are allowed. Quantiles use linear interpolation."""
    allowed = set()
    for fro in ops_list:
        for w in fro.ops:
            if w > 0:
                allowed.add(w)
    if len(allowed) < 2:
        return None
    q1, q3 = np.percentile(sorted(allowed), [25, 75], method="linear")
    return float(q3 - q1)


def congested_gaps(eig, gamma):
    """True when two distinct positive gaps lie within 10 Gamma of each other."""
    gaps = np.asarray(eig.gaps)
    if len(gaps) < 2:
        return False
    return bool(np.min(np.diff(gaps)) < CONGESTION_GAMMA_FACTOR * gamma)


def regime_ratios(bundle, g):
    h_norm = float(np.max(np.abs(bundle.eig.energies)))
    sweep = bundle.sched.omega_max / bundle.sched.t_cycle
    delta = max(bundle.eig.delta_max, 1e-300)
    return {
        "sweep_rate_over_g": (sweep / delta) / g if g > 0 else np.inf,
        "g_over_gamma": g / bundle.sched.gamma,
        "gamma_over_h_norm": bundle.sched.gamma / h_norm if h_norm else np.inf,
    }


def base_report(cfg, kind):
    return {
        "kind": kind,
        "config": config_to_dict(cfg),
        "quantile_rule": "linear interpolation between order statistics",
        "outputs": [],
    }


def _eigenbasis_state(eig, bitstring):
    d = eig.dim
    index = int(bitstring, 2)
    if index >= d:
        raise ValueError(f"initial state {bitstring!r} out of range")
    rho = np.zeros((d, d), dtype=complex)
    rho[index, index] = 1.0
    u = eig.vectors
    return u.conj().T @ rho @ u


def run_trajectory(cfg, out_dir):
    """Propagate the configured initial state cycle by cycle until the thermal
    distance drops below the target or the cycle budget runs out."""
    started = time.time()
    bundle = build_model(cfg)
    eig, sched = bundle.eig, bundle.sched
    rho_beta = thermal_state(eig, sched.beta)
    gibbs = np.real(np.diag(rho_beta))
    state = _eigenbasis_state(eig, cfg.initial_state)

    rows = []
    cache = {}
    stop_reason = "max_cycles"
    cycles_run = 0
    for cycle in range(cfg.max_cycles):
        traj = evolve(
            state,
            bundle.assembler,
            sched,
            (cycle + 1) * sched.t_cycle,
            cfg.dt,
            record_stride=cfg.record_stride,
            reference=rho_beta,
            t0=cycle * sched.t_cycle,
            cache=cache,
        )
        start = 0 if cycle == 0 else 1  # first record repeats the previous point
        for i in range(start, len(traj.times)):
            rows.append(
                [traj.times[i]]
                + list(traj.populations[i])
                + [traj.trace_distances[i], traj.coherence_norms[i]]
                + list(gibbs)
            )
        state = traj.final_state
        cycles_run = cycle + 1
        if traj.trace_distances[-1] < cfg.target_distance:
            stop_reason = "target_distance"
            break

    d = eig.dim
    header = (
        ["t"]
        + [f"pop_e{i + 1}" for i in range(d)]
        + ["trace_distance", "coherence_norm"]
        + [f"gibbs_e{i + 1}" for i in range(d)]
    )
    csv_path = os.path.join(out_dir, f"{cfg.out_prefix}_trajectory.csv")
    write_csv(csv_path, header, rows)

    cmap = cycle_map(bundle.assembler, sched, cfg.dt)
    ergodic, _ = check_ergodicity(bundle.ops)
    report = base_report(cfg, "trajectory")
    report.update(
        {
            "regime_ratios": regime_ratios(bundle, cfg.g),
            "ergodic": ergodic,
            "congested_gaps": congested_gaps(eig, sched.gamma),
            "spectral_gap": _safe_gap(cmap),
            "stop_reason": stop_reason,
            "cycles_run": cycles_run,
            "final_trace_distance": float(rows[-1][d + 1]),
            "outputs": [csv_path],
            "wall_time_s": time.time() - started,
        }
    )
    if cfg.figures:
        from .figures import plot_trajectory

        fig_path = os.path.join(out_dir, f"{cfg.out_prefix}_trajectory.png")
        plot_trajectory(np.array(rows, dtype=float), d, fig_path)
        report["outputs"].append(fig_path)
    return report


def _safe_gap(cmap):
    from .propagation import cycle_spectral_gap

    try:
        return float(cycle_spectral_gap(cmap))
    except Exception:
        return None


def _steady_distance(cfg_dict, a, b, beta, gamma, g):
    """Sweep worker: steady-state thermal distance for one grid point."""
    from .config import ScenarioConfig

    cfg = ScenarioConfig(**cfg_dict)
    cfg.A, cfg.B = a, b
    try:
        bundle = build_model(cfg, beta=beta, gamma=gamma, g=g)
        if cfg.t_cycle is None:
            # the (Gamma, beta) sweep ties the cycle length to the damping
            sched = BathSchedule(
                beta=beta,
                gamma=gamma,
                omega_max=bundle.sched.omega_max,
                t_cycle=snap_to_dt(4.0 / gamma, cfg.dt),
            )
        else:
            sched = bundle.sched
        cmap = cycle_map(bundle.assembler, sched, cfg.dt)
        rho_ss = steady_state(cmap)
        dist = trace_distance(rho_ss, thermal_state(bundle.eig, beta))
        iqr = gap_iqr(bundle.eig, bundle.ops)
        return dist, iqr, ""
    except Exception as exc:  # per-point failures are recorded, not fatal
        return None, None, f"{type(exc).__name__}: {exc}"


def run_sweep_grid(cfg, out_dir):
    """Steady-state thermal distance over a (Gamma, beta) or (A, B) grid."""
    started = time.time()
    cfg_dict = config_to_dict(cfg)
    bath_mode = bool(cfg.gamma_grid) and bool(cfg.beta_grid)
    jobs = []
    if bath_mode:
        for gamma in cfg.gamma_grid:
            for beta in cfg.beta_grid:
                jobs.append((cfg.A, cfg.B, beta, gamma, gamma))
    else:
        for a in cfg.a_grid:
            for b in cfg.b_grid:
                jobs.append((a, b, cfg.beta, cfg.gamma, cfg.g))

    with ProcessPoolExecutor(max_workers=MAX_WORKERS) as pool:
        results = list(
            pool.map(
                _steady_distance,
                [cfg_dict] * len(jobs),
                *zip(*jobs),
            )
        )

    rows = []
    failures = 0
    for (a, b, beta, gamma, _g), (dist, iqr, error) in zip(jobs, results):
        log10 = np.log10(dist) if dist else None
        if error:
            failures += 1
        if bath_mode:
            rows.append([gamma, beta, dist, log10, error])
        else:
            rows.append([a, b, dist, log10, iqr, error])
    header = (
        ["gamma", "beta", "distance", "log10_distance", "error"]
        if bath_mode
        else ["A", "B", "distance", "log10_distance", "gap_iqr", "error"]
    )
    csv_path = os.path.join(out_dir, f"{cfg.out_prefix}_sweep.csv")
    write_csv(csv_path, header, rows)

    report = base_report(cfg, "sweep_grid")
    report.update(
        {
            "grid_mode": "gamma_beta" if bath_mode else "A_B",
            "points": len(jobs),
            "failures": failures,
            "outputs": [csv_path],
            "wall_time_s": time.time() - started,
        }
    )
    if cfg.figures:
        from .figures import plot_sweep_grid

        fig_path = os.path.join(out_dir, f"{cfg.out_prefix}_sweep.png")
        plot_sweep_grid(rows, bath_mode, fig_path)
        report["outputs"].append(fig_path)
    return report


def chain_sites(L):
    """Ancilla attachment sites: every other spin starting from site 0, so
    M = L/2 for even L and (L+1)/2 for odd L."""
    return list(range(0, L, 2))


def _chain_point(cfg_dict, L, beta):
    from .config import ScenarioConfig

    cfg = ScenarioConfig(**cfg_dict)
    cfg.L = L
    cfg.coupling_sites = chain_sites(L)
    try:
        bundle = build_model(cfg, beta=beta)
        cmap = cycle_map(bundle.assembler, bundle.sched, cfg.dt)
        rho_ss = steady_state(cmap)
        dist = trace_distance(rho_ss, thermal_state(bundle.eig, beta))
        n_freqs = len(bundle.assembler.frequencies)
        memory = len(cfg.coupling_sites) * n_freqs * 2 ** (4 * L) * 16
        return dist, n_freqs, memory, ""
    except Exception as exc:
        return None, None, None, f"{type(exc).__name__}: {exc}"


def run_chain_scaling(cfg, out_dir):
    """Steady-state thermal distance for chains of increasing length, with a
    dense-generator memory estimate per point."""
    started = time.time()
    cfg_dict = config_to_dict(cfg)
    jobs = [(L, beta) for L in cfg.l_grid for beta in cfg.beta_grid]
    with ProcessPoolExecutor(max_workers=min(MAX_WORKERS, 3)) as pool:
        results = list(
            pool.map(_chain_point, [cfg_dict] * len(jobs), *zip(*jobs))
        )
    rows = []
    for (L, beta), (dist, n_freqs, memory, error) in zip(jobs, results):
        rows.append(
            [L, beta, dist, len(chain_sites(L)), n_freqs, memory, error]
        )
    header = [
        "L",
        "beta",
        "distance",
        "n_ancillas",
        "n_frequencies",
        "generator_memory_bytes",
        "error",
    ]
    csv_path = os.path.join(out_dir, f"{cfg.out_prefix}_chain.csv")
    write_csv(csv_path, header, rows)

    report = base_report(cfg, "chain_scaling")
    report.update(
        {
            "points": len(jobs),
            "failures": sum(1 for r in results if r[3]),
            "outputs": [csv_path],
            "wall_time_s": time.time() - started,
        }
    )
    if cfg.figures:
        from .figures import plot_chain_scaling

        fig_path = os.path.join(out_dir, f"{cfg.out_prefix}_chain.png")
        plot_chain_scaling(rows, fig_path)
        report["outputs"].append(fig_path)
    return report


def run_rates_plot(cfg, out_dir):
    """Engineered spectral density and detailed-balance violation over a
    frequency grid at a fixed ancilla splitting."""
    started = time.time()
    omegas = cfg.omega_grid or np.linspace(0.05, 10.0, 200).tolist()
    header = ["omega"]
    for beta in cfg.beta_grid:
        tag = fmt(beta)
        header += [
            f"lambda_beta{tag}",
            f"log10_lambda_beta{tag}",
            f"delta_beta{tag}",
            f"log10_delta_beta{tag}",
        ]
    rows = []
    for w in omegas:
        row = [w]
        for beta in cfg.beta_grid:
            sched = BathSchedule(
                beta=beta,
                gamma=cfg.gamma,
                omega_max=cfg.omega_fixed,
                t_cycle=1.0,
                profile="static",
            )
            lam = spectral_density(sched, 0.0, w)
            delta = db_violation(sched, 0.0, w) if w > 0 else None
            row += [
                lam,
                np.log10(lam),
                delta,
                np.log10(delta) if delta else None,
            ]
        rows.append(row)
    csv_path = os.path.join(out_dir, f"{cfg.out_prefix}_rates.csv")
    write_csv(csv_path, header, rows)

    report = base_report(cfg, "rates_plot")
    report.update(
        {
            "omega_fixed": cfg.omega_fixed,
            "outputs": [csv_path],
            "wall_time_s": time.time() - started,
        }
    )
    if cfg.figures:
        from .figures import plot_rates

        fig_path = os.path.join(out_dir, f"{cfg.out_prefix}_rates.png")
        plot_rates(rows, cfg.beta_grid, fig_path)
        report["outputs"].append(fig_path)
    return report


def run_oracle(cfg, out_dir):
    """Joint-model versus reduced-equation deviation for a list of coupling
    strengths at a static, resonant ancilla splitting."""
    started = time.time()
    spec = build_hamiltonian(cfg)
    reports = []
    for g in cfg.oracle_g_values:
        coupling = CouplingSpec(0, cfg.coupling_sites[0], cfg.coupling_axis, g)
        reports.append(
            validate_reduction(
                spec,
                coupling,
                beta=cfg.beta,
                gamma=cfg.gamma,
                omega_static=cfg.oracle_omega,
                t_final=cfg.oracle_t_final,
            )
        )
    times = reports[0]["times"]
    header = ["t"] + [f"deviation_g{fmt(g)}" for g in cfg.oracle_g_values]
    rows = [
        [t] + [rep["deviation"][i] for rep in reports]
        for i, t in enumerate(times)
    ]
    csv_path = os.path.join(out_dir, f"{cfg.out_prefix}_oracle.csv")
    write_csv(csv_path, header, rows)

    max_devs = [rep["max_deviation"] for rep in reports]
    report = base_report(cfg, "oracle")
    report.update(
        {
            "g_values": list(cfg.oracle_g_values),
            "max_deviations": max_devs,
            "monotone_in_g": all(
                a >= b for a, b in zip(max_devs, max_devs[1:])
            ),
            "regime_warnings": [rep["warnings"] for rep in reports],
            "regime_ratios": [rep["regime_ratios"] for rep in reports],
            "outputs": [csv_path],
            "wall_time_s": time.time() - started,
        }
    )
    if cfg.figures:
        from .figures import plot_oracle

        fig_path = os.path.join(out_dir, f"{cfg.out_prefix}_oracle.png")
        plot_oracle(rows, cfg.oracle_g_values, fig_path)
        report["outputs"].append(fig_path)
    return report


def run_steady_state(cfg, out_dir):
    """Single steady-state computation with populations and thermal distance."""
    started = time.time()
    bundle = build_model(cfg)
    cmap = cycle_map(bundle.assembler, bundle.sched, cfg.dt)
    rho_ss = steady_state(cmap)
    rho_beta = thermal_state(bundle.eig, cfg.beta)
    dist = trace_distance(rho_ss, rho_beta)
    rows = [
        [
            i + 1,
            bundle.eig.energies[i],
            np.real(np.diag(rho_beta))[i],
            np.real(np.diag(rho_ss))[i],
        ]
        for i in range(bundle.eig.dim)
    ]
    csv_path = os.path.join(out_dir, f"{cfg.out_prefix}_steady_state.csv")
    write_csv(
        csv_path,
        ["eigenstate", "energy", "gibbs_population", "steady_population"],
        rows,
    )
    ergodic, _ = check_ergodicity(bundle.ops)
    report = base_report(cfg, "steady_state")
    report.update(
        {
            "trace_distance": dist,
            "ergodic": ergodic,
            "congested_gaps": congested_gaps(bundle.eig, bundle.sched.gamma),
            "spectral_gap": _safe_gap(cmap),
            "regime_ratios": regime_ratios(bundle, cfg.g),
            "outputs": [csv_path],
            "wall_time_s": time.time() - started,
        }
    )
    return report


RUNNERS = {
    "trajectory": run_trajectory,
    "steady_state": run_steady_state,
    "sweep_grid": run_sweep_grid,
    "chain_scaling": run_chain_scaling,
    "rates_plot": run_rates_plot,
    "oracle": run_oracle,
}


def run_config(cfg, out_dir):
    """Execute a validated config and write its CSV, report and figures."""
    os.makedirs(out_dir, exist_ok=True)
    report = RUNNERS[cfg.kind](cfg, out_dir)
    report_path = os.path.join(out_dir, f"{cfg.out_prefix}_report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, default=_json_default)
        fh.write("\n")
    report["report_path"] = report_path
    return report


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value)}")
