"""Command-line entry point: ``mrrt run | bench | render``.

Exit codes: 0 reached goal (or success), 2 usage error, 3 collided,
4 timeout, 5 scenario/config error, 6 corrupt trace.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from .bench import run_bench
from .planner import VARIANTS
from .render import render_trace
from .scenario import load_scenario
from .simworld import COLLIDED, REACHED_GOAL, ConfigurationError, run_episode
from .trace import TraceError, write_trace

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COLLIDED = 3
EXIT_TIMEOUT = 4
EXIT_CONFIG = 5
EXIT_TRACE = 6


def builtin_scenarios() -> List[str]:
    root = resources.files("mrrt") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_scenario(name: str):
    """Load a scenario from a path, or by name from the bundled set."""
    if not Path(name).exists() and name in builtin_scenarios():
        with resources.as_file(resources.files("mrrt") / "scenarios" / f"{name}.json") as p:
            return load_scenario(p)
    return load_scenario(name)


def parse_seeds(text: str) -> List[int]:
    """``"3"``, ``"0..49"`` (inclusive) or ``"1,4,9"``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}; use N, A..B or A,B,C") from None


def parse_variants(text: str) -> List[str]:
    names = [v.strip() for v in text.split(",") if v.strip()]
    bad = [v for v in names if v not in VARIANTS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown variant(s) {', '.join(bad) or '(none)'}; choose from {', '.join(VARIANTS)}")
    return names


def cmd_run(args) -> int:
    try:
        scenario = resolve_scenario(args.scenario)
        seed = scenario.seeds[0] if args.seed is None else args.seed
        result = run_episode(scenario, args.variant, seed, horizon=args.horizon,
                             record_forest=not args.no_forest)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_trace(args.out, result.trace, timing=args.timing)
    print(f"{result.status} after {result.steps} steps, traveled {result.distance_traveled:.3f} m")
    if result.status == REACHED_GOAL:
        return EXIT_OK
    return EXIT_COLLIDED if result.status == COLLIDED else EXIT_TIMEOUT


def cmd_bench(args) -> int:
    try:
        scenarios = [resolve_scenario(s) for s in args.scenario]
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    names = set()
    for i, sc in enumerate(scenarios):
        if sc.name in names:
            sc.name = f"{sc.name}_{i}"
        names.add(sc.name)
    seeds = args.seeds if args.seeds is not None else scenarios[0].seeds
    report = run_bench(scenarios, args.variants, seeds, jobs=args.jobs, trace_dir=args.trace_dir)
    Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    for row in report["rows"]:
        t = row["median_replan_time"]
        print(f"{row['scenario']:>16} {row['variant']:>10}  success={row['success_rate']:.2f}  "
              f"median_samples={row['median_samples_per_cycle']}  "
              f"median_time={'n/a' if t is None else f'{t * 1e3:.3f}ms'}")
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        frames = render_trace(args.trace, args.out, args.every)
    except TraceError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_TRACE
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EXIT_TRACE
    print(f"wrote {len(frames)} frame(s) to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrrt", description="Multi-tree RRT replanning simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one episode and write its trace")
    p.add_argument("--scenario", required=True, help="scenario JSON path or bundled scenario name")
    p.add_argument("--variant", default="mrrt", choices=VARIANTS)
    p.add_argument("--seed", type=int, default=None, help="default: first seed of the scenario")
    p.add_argument("--out", required=True, help="trace output (JSON lines)")
    p.add_argument("--horizon", type=int, default=None, help="override sim.horizon")
    p.add_argument("--no-forest", action="store_true", help="omit forest snapshots from the trace")
    p.add_argument("--timing", action="store_true", help="record wall times (trace no longer reproducible)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="paired-seed comparison of planner variants")
    p.add_argument("--scenario", required=True, nargs="+")
    p.add_argument("--variants", type=parse_variants, default=list(VARIANTS))
    p.add_argument("--seeds", type=parse_seeds, default=None, help="N, A..B or A,B,C")
    p.add_argument("--out", required=True, help="report output (JSON)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trace-dir", default=None, help="also write per-episode traces here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="render trace frames as SVG")
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--every", type=int, default=1)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
