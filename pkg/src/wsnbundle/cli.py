"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 no feasible plan.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, InfeasibleBounds, UnsatisfiableAccuracy
from .model import seconds_to_us
from .optimizer import brute_force_solve, build_constraints, solve
from .scenario import load_scenario
from .simulator import BundlingMode, ScenarioConfig, run, summary
from .simulator.trace import fmt_us
from .sync import STUDY_WANDER_PPM, median_sync_error

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2
AXES = ("d_e2e_max", "chi_max", "drift_ppm", "si")
PRESETS = Path(__file__).parent / "presets"


class _Parser(argparse.ArgumentParser):
    # usage errors share the config-error exit code; 2 means infeasible here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _resolve(path: str) -> Path:
    p = Path(path)
    if not p.exists() and (PRESETS / path).exists():
        return PRESETS / path
    return p


def _requirement(cfg: ScenarioConfig, step: int):
    if not cfg.schedule:
        raise ConfigError("scenario has no requirements to optimize", "requirement_schedule")
    if not -len(cfg.schedule) <= step < len(cfg.schedule):
        raise ConfigError(f"step {step} out of range", "requirement_schedule")
    return cfg.schedule[step][1]


def cmd_optimize(args) -> int:
    cfg = load_scenario(_resolve(args.scenario))
    req = _requirement(cfg, args.step)
    try:
        cs = build_constraints(cfg.topology, req, cfg.table)
    except (InfeasibleBounds, UnsatisfiableAccuracy) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.dump_constraints:
        print(cs.dump())
    report = brute_force_solve(cs) if args.brute_force else solve(cs)
    if not report.optimal:
        print("infeasible: no integer plan satisfies the delay bounds", file=sys.stderr)
        return EXIT_INFEASIBLE
    for node, gamma in report.plan.gamma.items():
        print(f"node {node}: gamma={gamma}")
    print(f"objective: {report.objective}")
    if report.lp_bound is not None:
        print(f"lp_bound: {report.lp_bound} ({float(report.lp_bound):.4f})")
    print(f"nodes_explored: {report.nodes_explored}")
    return EXIT_OK


def _baseline(cfg: ScenarioConfig) -> ScenarioConfig:
    return replace(cfg, bundling_mode=BundlingMode.NONE)


def cmd_simulate(args) -> int:
    cfg = load_scenario(_resolve(args.scenario))
    trace = run(cfg)
    base = None if cfg.bundling_mode is BundlingMode.NONE else run(_baseline(cfg))
    paths = trace.write_csv(args.outdir)
    info = summary(trace, base)
    out = Path(args.outdir) / "summary.json"
    out.write_text(json.dumps(info, indent=2) + "\n")
    for k, v in info.items():
        print(f"{k}: {v}")
    for p in (*paths, out):
        print(f"wrote {p}")
    return EXIT_OK


def _parse_value(axis: str, text: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}", "values") from exc
    if axis == "chi_max":
        if value.denominator != 1:
            raise ConfigError(f"chi_max must be an integer, got {text}", "values")
        return int(value)
    return value


def _sweep_point(cfg: ScenarioConfig, axis: str, value, seeds: int) -> dict[str, object]:
    row: dict[str, object] = {axis: str(value)}
    if axis == "si":
        si = seconds_to_us(value)
        drifts = [Fraction(40) if k % 2 else Fraction(-40) for k in range(seeds)]
        med = median_sync_error(si, drifts, range(seeds), wander_ppm=STUDY_WANDER_PPM)
        row["median_sync_error_us"] = f"{med:.4f}"
        return row
    if axis == "drift_ppm":
        cfg = replace(cfg, drifts_ppm={n: value for n in cfg.topology.sensors})
    else:
        field = {"d_e2e_max": "d_e2e_max", "chi_max": "chi_max"}[axis]
        new = seconds_to_us(value) if axis == "d_e2e_max" else value
        sched = tuple((t, replace(r, **{field: new})) for t, r in cfg.schedule)
        cfg = replace(cfg, schedule=sched)
    if cfg.schedule:
        try:
            report = solve(build_constraints(cfg.topology, cfg.schedule[0][1], cfg.table))
            row["objective"] = report.objective if report.optimal else ""
        except (InfeasibleBounds, UnsatisfiableAccuracy):
            row["objective"] = ""
    trace = run(cfg)
    row.update(summary(trace))
    errs = [abs(d.e2e - d.true_e2e) for d in trace.delays if d.true_e2e is not None]
    row["max_delay_error_s"] = fmt_us(max(errs)) if errs else ""
    return row


def cmd_sweep(args) -> int:
    if args.axis not in AXES:
        raise ConfigError(f"unknown axis {args.axis!r}, expected one of {', '.join(AXES)}", "axis")
    if not args.values:
        raise ConfigError("at least one value is required", "values")
    cfg = load_scenario(_resolve(args.scenario))
    values = [_parse_value(args.axis, v) for v in args.values]
    jobs = [(cfg, args.axis, v, args.seeds) for v in values]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_point, *zip(*jobs)))
    else:
        rows = [_sweep_point(*j) for j in jobs]
    header = list(dict.fromkeys(k for row in rows for k in row))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, header, lineterminator="\n", restval="")
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wsnbundle", description="Delay-bounded message bundling for sensor trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    o = sub.add_parser("optimize", help="solve the bundling ILP for one requirement")
    o.add_argument("scenario", help="scenario JSON file or preset name")
    o.add_argument("--step", type=int, default=0, help="requirement schedule index (default 0)")
    o.add_argument("--dump-constraints", action="store_true")
    o.add_argument("--brute-force", action="store_true", help="use the enumeration oracle")
    o.set_defaults(func=cmd_optimize)

    s = sub.add_parser("simulate", help="run a scenario and write CSV traces")
    s.add_argument("scenario")
    s.add_argument("outdir")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="one summary row per parameter value")
    w.add_argument("scenario")
    w.add_argument("--axis", required=True, help=f"one of {', '.join(AXES)}")
    w.add_argument("--values", nargs="*", default=[], help="values; durations in seconds")
    w.add_argument("--seeds", type=int, default=20, help="trials per value for the si axis")
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--out", help="CSV path (default stdout)")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
