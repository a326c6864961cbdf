"""Command-line entry point.

Subcommands:
  run <config-file>          execute a YAML scenario config
  preset <name> [--out DIR]  execute a named built-in scenario
  validate <config-file>     check a config without running it
  units <platform> <beta>    physical temperature and wall time for a platform

Successful runs exit 0 and print the JSON run-report to stdout. Failures exit
nonzero and print a machine-readable error object {"error": ..., "detail": ...}
to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, PRESETS, config_to_dict, load_config, preset
from .units import DEFAULT_G_RATIO, PLATFORMS, platform_units


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spinbath",
        description="Engineered-bath thermalization experiments for small "
        "spin systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=".", help="output directory")

    p_preset = sub.add_parser("preset", help="execute a built-in scenario")
    p_preset.add_argument("name", choices=sorted(PRESETS))
    p_preset.add_argument("--out", default=".", help="output directory")

    p_val = sub.add_parser("validate", help="validate a config without running")
    p_val.add_argument("config")

    p_units = sub.add_parser(
        "units", help="platform temperature and wall-time conversion"
    )
    p_units.add_argument("platform", choices=sorted(PLATFORMS))
    p_units.add_argument("beta", type=float)
    p_units.add_argument(
        "--duration",
        type=float,
        default=250.0,
        help="simulated protocol length in units of 1/g (default 250)",
    )
    p_units.add_argument(
        "--g-ratio",
        type=float,
        default=DEFAULT_G_RATIO,
        help="J_max / g (default 10)",
    )
    return parser


def _fail(kind, detail, code=1):
    json.dump({"error": kind, "detail": str(detail)}, sys.stderr)
    sys.stderr.write("\n")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
        elif args.command == "preset":
            cfg = preset(args.name)
        elif args.command == "validate":
            cfg = load_config(args.config)
            json.dump(
                {"valid": True, "config": config_to_dict(cfg)},
                sys.stdout,
                indent=2,
            )
            sys.stdout.write("\n")
            return 0
        else:  # units
            platform = PLATFORMS[args.platform]
            temperature, wall = platform_units(
                platform, args.beta, args.duration, args.g_ratio
            )
            json.dump(
                {
                    "platform": platform.name,
                    "j_max_hz": platform.j_max_hz,
                    "beta": args.beta,
                    "sim_duration": args.duration,
                    "temperature_K": temperature,
                    "wall_time_s": wall,
                },
                sys.stdout,
                indent=2,
            )
            sys.stdout.write("\n")
            return 0
    except ConfigError as exc:
        return _fail("config", exc, code=2)
    except FileNotFoundError as exc:
        return _fail("io", exc, code=2)
    except ValueError as exc:
        return _fail("value", exc, code=2)

    from .runs import run_config

    try:
        report = run_config(cfg, args.out)
    except Exception as exc:
        return _fail(type(exc).__name__, exc, code=1)
    json.dump(report, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
