"""Command-line front end: sweeps, figure presets and the g2 gate.

Exit codes: 0 on success, 1 for usage or config errors, 2 when every point
of a sweep failed numerically. Partial failures exit 0; the flagged rows
are visible as nan cells and in the '# points:' metadata line.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ThermalcastError, UsageError
from .hbt import thermality_check
from .scenarios import SCENARIO_NAMES, ScenarioParams, build_scenario
from .sweep import (DEFAULT_G2_SAMPLES, PARAM_NAMES, PRESET_NAMES, emit_csv,
                    expand_preset, parse_config, run_sweep)


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route through our own codes
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="thermalcast", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run one sweep from a config file")
    p_sweep.add_argument("--config", required=True, help="key=value config file")
    p_sweep.add_argument("--out", required=True, help="destination CSV path")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_fig = sub.add_parser("figure", help="run a named figure preset")
    p_fig.add_argument("--name", required=True, choices=PRESET_NAMES)
    p_fig.add_argument("--out-dir", required=True, help="directory for the CSV files")
    p_fig.set_defaults(handler=_cmd_figure)

    p_g2 = sub.add_parser("g2check", help="sample a scenario and test thermality via g2(0)")
    p_g2.add_argument("--scenario", choices=SCENARIO_NAMES, default="basic")
    p_g2.add_argument("--samples", type=int, default=DEFAULT_G2_SAMPLES)
    p_g2.add_argument("--seed", type=int, required=True)
    for name in PARAM_NAMES:
        p_g2.add_argument(f"--{name.replace('_', '-')}", type=float, dest=name,
                          default=getattr(ScenarioParams, name),
                          help=f"scenario parameter {name}")
    p_g2.set_defaults(handler=_cmd_g2check)
    return parser


def _report_file(result, destination: Path):
    emit_csv(result, destination)
    print(f"wrote {destination} ({len(result.rows)} points, {result.n_failed} failed)")


def _cmd_sweep(args) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    result = run_sweep(parse_config(text))
    _report_file(result, Path(args.out))
    return 2 if result.all_failed else 0


def _cmd_figure(args) -> int:
    preset = expand_preset(args.name)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    total = failed = 0
    for tag, spec in preset.branches:
        result = run_sweep(spec)
        stem = preset.name if not tag else f"{preset.name}_{tag}"
        _report_file(result, out_dir / f"{stem}.csv")
        total += len(result.rows)
        failed += result.n_failed
    return 2 if total and failed == total else 0


def _cmd_g2check(args) -> int:
    params = ScenarioParams(**{name: getattr(args, name) for name in PARAM_NAMES})
    scenario = build_scenario(args.scenario, params)
    report = thermality_check(
        scenario.state, scenario.mode_index("A"), scenario.mode_index("B"),
        n_samples=args.samples, seed=args.seed)
    print(f"scenario: {args.scenario}")
    print("params: " + " ".join(f"{name}={getattr(args, name):g}" for name in PARAM_NAMES))
    print(f"g2 estimate: {report.g2_estimate:.6g} +/- {report.std_error:.3g} "
          f"({report.n_samples} samples, jackknife)")
    analytic = "undefined" if report.g2_analytic is None else f"{report.g2_analytic:.6g}"
    print(f"g2 analytic: {analytic}")
    print(f"verdict: {report.verdict}")
    print(f"seed: {report.seed}  generator: {report.generator}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except ThermalcastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
