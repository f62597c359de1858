"""Per-step trace records and their JSON-lines encoding.

One record per simulation step, fields in a fixed order::

    step            0-based step index, strictly increasing
    time            world time at which the step sensed and planned
    robot           [x, y] where the step started (the planning origin)
    robot_after     [x, y] after executing the step
    kind            "replan" | "prune" | "goal" | "collision" | "timeout"
    known_obstacles [[cx, cy, r], ...] as seen by the planner this step
    stats           replan statistics, or null when the planner refused
                    to plan (robot inside an inflated obstacle)
    path            [[x, y], ...] planned path, or null
    true_obstacles  [[cx, cy, r, known], ...] ground truth at ``time``;
                    ``known`` is 1 for obstacles in the map from the start
    goal            [x, y]
    workspace       [min_x, min_y, max_x, max_y]
    forest          optional {"nodes": [[id, x, y, tree], ...],
                    "edges": [[parent, child], ...]}

``stats.elapsed`` is wall time and therefore written as null unless timing
output is requested, which keeps default traces byte-reproducible.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator, List, Optional

STAT_FIELDS = ("samples_drawn", "edges_pruned", "trees_before", "trees_after",
               "connect_attempts", "nodes_before", "nodes_after", "nodes_deleted", "elapsed")
EVENT_KINDS = ("replan", "prune", "goal", "collision", "timeout")


class TraceError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _xy(p) -> List[float]:
    return [float(p[0]), float(p[1])]


def encode_forest(forest) -> dict:
    nodes = [[n, *_xy(forest.config(n)), forest.tree_of(n)] for n in forest.nodes()]
    edges = [[p, c] for p, c in forest.edges()]
    return {"nodes": nodes, "edges": edges}


def make_event(step, time, robot, robot_after, snapshot, outcome, kind, *,
               true_obstacles=(), goal=None, workspace=None, forest=None) -> dict:
    stats = None
    path = None
    if outcome is not None:
        s = vars(outcome.stats)
        stats = {k: s[k] for k in STAT_FIELDS}
        if outcome.path is not None:
            path = [_xy(c) for c in outcome.path.configs]
    event = {
        "step": int(step),
        "time": float(time),
        "robot": _xy(robot),
        "robot_after": _xy(robot_after),
        "kind": kind,
        "known_obstacles": [[*_xy(d.center), float(d.radius)] for d in snapshot.discs],
        "stats": stats,
        "path": path,
        "true_obstacles": [[*_xy(d.center), float(d.radius), int(known)] for d, known in true_obstacles],
        "goal": None if goal is None else _xy(goal),
        "workspace": None if workspace is None else [float(workspace.min_x), float(workspace.min_y),
                                                     float(workspace.max_x), float(workspace.max_y)],
    }
    if forest is not None:
        event["forest"] = encode_forest(forest)
    return event


def dumps_event(event: dict, timing: bool = False) -> str:
    if not timing and event.get("stats") is not None:
        event = dict(event, stats=dict(event["stats"], elapsed=None))
    return json.dumps(event, separators=(",", ":"))


def write_trace(path, events: Iterable[dict], timing: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(dumps_event(ev, timing))
            fh.write("\n")


def _check_event(ev, lineno: int, prev_step: Optional[int]) -> None:
    if not isinstance(ev, dict):
        raise TraceError("record is not an object", lineno)
    for key in ("step", "time", "robot", "kind"):
        if key not in ev:
            raise TraceError(f"missing field {key!r}", lineno)
    if ev["kind"] not in EVENT_KINDS:
        raise TraceError(f"unknown event kind {ev['kind']!r}", lineno)
    if prev_step is not None and ev["step"] <= prev_step:
        raise TraceError("step numbers must strictly increase", lineno)


def iter_trace(path) -> Iterator[dict]:
    prev = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                ev = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceError(f"corrupt record ({exc.msg})", lineno) from None
            _check_event(ev, lineno, prev)
            prev = ev["step"]
            yield ev


def read_trace(path) -> List[dict]:
    return list(iter_trace(Path(path)))
