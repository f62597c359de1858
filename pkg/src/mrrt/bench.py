"""Paired-seed benchmark over (scenario, variant, seed) episodes.

Every variant runs with the same seed list, and the seed drives both the
planner's random stream and nothing else, so all variants face the same
obstacle trajectories. Aggregates pool every replanning cycle of every
episode of a (scenario, variant) pair.
"""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .planner import VARIANTS
from .simworld import REACHED_GOAL, Scenario, run_episode
from .trace import write_trace


@dataclass
class EpisodeSummary:
    scenario: str
    variant: str
    seed: int
    status: str
    steps: int
    distance_traveled: float
    cycles: List[Optional[dict]]
    error: Optional[str] = None


def _run_one(job) -> EpisodeSummary:
    scenario, variant, seed, trace_dir = job
    try:
        res = run_episode(scenario, variant, seed)
    except Exception as exc:  # recorded in the report, never fatal
        return EpisodeSummary(scenario.name, variant, seed, "error", 0, 0.0, [], repr(exc))
    if trace_dir is not None:
        write_trace(Path(trace_dir) / trace_name(scenario.name, variant, seed), res.trace, timing=True)
    return EpisodeSummary(scenario.name, variant, seed, res.status, res.steps,
                          res.distance_traveled, res.cycles)


def trace_name(scenario: str, variant: str, seed: int) -> str:
    return f"{scenario}__{variant}__{seed}.jsonl"


def summarize(episodes: Sequence[EpisodeSummary], seeds: Sequence[int]) -> dict:
    """Aggregate one (scenario, variant) group into a report row."""
    seeds = list(seeds)
    eps = [e for e in episodes if e.seed in set(seeds)]
    cycles = [c for e in eps for c in e.cycles if c is not None]
    times = [c["elapsed"] for c in cycles]
    samples = [c["samples_drawn"] for c in cycles]
    reached = [e for e in eps if e.status == REACHED_GOAL]
    statuses: Dict[str, int] = {}
    for e in eps:
        statuses[e.status] = statuses.get(e.status, 0) + 1
    return {
        "scenario": eps[0].scenario if eps else None,
        "variant": eps[0].variant if eps else None,
        "episodes": len(eps),
        "success_rate": len(reached) / len(eps) if eps else 0.0,
        "median_replan_time": statistics.median(times) if times else None,
        "p90_replan_time": float(np.percentile(times, 90)) if times else None,
        "median_samples_per_cycle": statistics.median(samples) if samples else None,
        "mean_samples_per_cycle": statistics.fmean(samples) if samples else None,
        "mean_path_length": statistics.fmean(e.distance_traveled for e in reached) if reached else None,
        "cycles": len(cycles),
        "statuses": dict(sorted(statuses.items())),
        "errors": [{"seed": e.seed, "error": e.error} for e in eps if e.error],
        "seeds": seeds,
    }


def run_bench(scenarios: Sequence[Scenario], variants: Iterable[str], seeds: Sequence[int],
              jobs: int = 1, trace_dir=None) -> dict:
    variants = list(variants)
    bad = [v for v in variants if v not in VARIANTS]
    if bad:
        raise ValueError(f"unknown variant(s) {bad}; expected a subset of {list(VARIANTS)}")
    if not scenarios or not variants or not seeds:
        raise ValueError("need at least one scenario, one variant and one seed")
    if trace_dir is not None:
        Path(trace_dir).mkdir(parents=True, exist_ok=True)
    jobs_list = [(sc, v, s, trace_dir) for sc in scenarios for v in variants for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_run_one, jobs_list))
    else:
        done = [_run_one(j) for j in jobs_list]
    rows = []
    for sc in scenarios:
        for v in variants:
            group = [e for e in done if e.scenario == sc.name and e.variant == v]
            rows.append(summarize(group, seeds))
    return {"rows": rows, "episodes": [
        {"scenario": e.scenario, "variant": e.variant, "seed": e.seed, "status": e.status,
         "steps": e.steps, "distance_traveled": e.distance_traveled} for e in done]}
