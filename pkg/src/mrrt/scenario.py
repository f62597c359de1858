"""JSON scenario files.

Layout::

    {
      "name": "corridor",
      "workspace": {"min_x": 0, "min_y": 0, "max_x": 20, "max_y": 10},
      "start": [1, 5], "goal": [19, 5],
      "robot": {"speed": 1.0, "radius": 0.2},
      "sensor": {"range": 4.0},
      "planner": {"eta": 1.0, "goal_bias": 0.05, "neighbor_radius": 2.0,
                  "sample_budget": 2000, "inflation": 0.3},
      "obstacles": [
        {"center": [8, 5], "radius": 1.0, "known": false,
         "motion": {"kind": "linear", "velocity": [0, 1.5]}},
        {"center": [12, 2], "radius": 0.8, "known": true,
         "motion": {"kind": "waypoints", "points": [[12, 2], [12, 8]], "speed": 1}}
      ],
      "sim": {"dt": 0.1, "horizon": 400},
      "seeds": [0, 1, 2]
    }

Only ``workspace``, ``start``, ``goal``, ``robot.speed`` and ``sensor.range``
are required; everything else has a default. ``sim`` also accepts
``goal_tolerance``, ``sweep_substeps`` and ``forget_unseen``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .geometry import Config, Disc, Workspace
from .planner import PlannerParams
from .simworld import ConfigurationError, Motion, ObstacleSpec, Scenario


def _get(obj: dict, key: str, where: str, default: Any = ...) -> Any:
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{where or 'scenario'}: expected an object")
    if key not in obj:
        if default is ...:
            raise ConfigurationError(f"missing required field {where + '.' if where else ''}{key}")
        return default
    return obj[key]


def _num(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigurationError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{where}: expected an integer, got {value!r}")
    return value


def _point(value: Any, where: str) -> Config:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigurationError(f"{where}: expected [x, y], got {value!r}")
    return Config(_num(value[0], f"{where}[0]"), _num(value[1], f"{where}[1]"))


def _motion(obj: dict, where: str) -> Motion:
    kind = _get(obj, "kind", where)
    if kind == "static":
        return Motion()
    if kind == "linear":
        v = _point(_get(obj, "velocity", where), f"{where}.velocity")
        return Motion("linear", velocity=(v.x, v.y))
    if kind == "waypoints":
        pts = _get(obj, "points", where)
        if not isinstance(pts, list) or len(pts) < 2:
            raise ConfigurationError(f"{where}.points: need a list of at least two points")
        points = tuple(_point(p, f"{where}.points[{i}]") for i, p in enumerate(pts))
        return Motion("waypoints", waypoints=points, speed=_num(_get(obj, "speed", where), f"{where}.speed"))
    raise ConfigurationError(f"{where}.kind: unknown motion kind {kind!r}")


def scenario_from_dict(data: dict) -> Scenario:
    try:
        ws = _get(data, "workspace", "")
        workspace = Workspace(*(_num(_get(ws, k, "workspace"), f"workspace.{k}")
                                for k in ("min_x", "min_y", "max_x", "max_y")))
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    start = _point(_get(data, "start", ""), "start")
    goal = _point(_get(data, "goal", ""), "goal")
    robot = _get(data, "robot", "")
    speed = _num(_get(robot, "speed", "robot"), "robot.speed")
    radius = _num(_get(robot, "radius", "robot", 0.0), "robot.radius")
    sensor_range = _num(_get(_get(data, "sensor", ""), "range", "sensor"), "sensor.range")

    pl = _get(data, "planner", "", {})
    kw = {}
    for key in ("eta", "goal_bias", "neighbor_radius", "inflation"):
        if _get(pl, key, "planner", None) is not None:
            kw[key] = _num(pl[key], f"planner.{key}")
    if "sample_budget" in pl:
        kw["sample_budget"] = _int(pl["sample_budget"], "planner.sample_budget")
    kw.setdefault("inflation", radius)
    try:
        params = PlannerParams.for_workspace(workspace, **kw)
    except ValueError as exc:
        raise ConfigurationError(f"planner: {exc}") from None

    obstacles = []
    for i, ob in enumerate(_get(data, "obstacles", "", [])):
        where = f"obstacles[{i}]"
        try:
            disc = Disc(_point(_get(ob, "center", where), f"{where}.center"),
                        _num(_get(ob, "radius", where), f"{where}.radius"))
        except ValueError as exc:
            raise ConfigurationError(f"{where}: {exc}") from None
        motion = _motion(_get(ob, "motion", where, {"kind": "static"}), f"{where}.motion")
        known = _get(ob, "known", where, True)
        if not isinstance(known, bool):
            raise ConfigurationError(f"{where}.known: expected true or false")
        obstacles.append(ObstacleSpec(disc, motion, known))

    sim = _get(data, "sim", "", {})
    tol = _get(sim, "goal_tolerance", "sim", None)
    seeds = _get(data, "seeds", "", [0])
    if not isinstance(seeds, list) or not seeds:
        raise ConfigurationError("seeds: expected a non-empty list of integers")
    scenario = Scenario(
        workspace=workspace,
        start=start,
        goal=goal,
        robot_speed=speed,
        robot_radius=radius,
        sensor_range=sensor_range,
        planner=params,
        obstacles=obstacles,
        dt=_num(_get(sim, "dt", "sim", 0.1), "sim.dt"),
        horizon=_int(_get(sim, "horizon", "sim", 1000), "sim.horizon"),
        seeds=[_int(s, f"seeds[{i}]") for i, s in enumerate(seeds)],
        goal_tolerance=None if tol is None else _num(tol, "sim.goal_tolerance"),
        sweep_substeps=_int(_get(sim, "sweep_substeps", "sim", 10), "sim.sweep_substeps"),
        forget_unseen=bool(_get(sim, "forget_unseen", "sim", False)),
        name=str(_get(data, "name", "", "scenario")),
    )
    scenario.validate()
    return scenario


def scenario_to_dict(sc: Scenario) -> dict:
    w = sc.workspace
    p = sc.planner

    def motion(m: Motion) -> dict:
        if m.kind == "linear":
            return {"kind": "linear", "velocity": list(m.velocity)}
        if m.kind == "waypoints":
            return {"kind": "waypoints", "points": [list(q) for q in m.waypoints], "speed": m.speed}
        return {"kind": "static"}

    sim = {"dt": sc.dt, "horizon": sc.horizon, "sweep_substeps": sc.sweep_substeps,
           "forget_unseen": sc.forget_unseen}
    if sc.goal_tolerance is not None:
        sim["goal_tolerance"] = sc.goal_tolerance
    return {
        "name": sc.name,
        "workspace": {"min_x": w.min_x, "min_y": w.min_y, "max_x": w.max_x, "max_y": w.max_y},
        "start": list(sc.start),
        "goal": list(sc.goal),
        "robot": {"speed": sc.robot_speed, "radius": sc.robot_radius},
        "sensor": {"range": sc.sensor_range},
        "planner": {"eta": p.eta, "goal_bias": p.goal_bias, "neighbor_radius": p.neighbor_radius,
                    "sample_budget": p.sample_budget, "inflation": p.inflation},
        "obstacles": [{"center": list(o.disc.center), "radius": o.disc.radius,
                       "motion": motion(o.motion), "known": o.known} for o in sc.obstacles],
        "sim": sim,
        "seeds": list(sc.seeds),
    }


def loads_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(data)


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario {path}: {exc.strerror}") from None
    return loads_scenario(text)


def dumps_scenario(sc: Scenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2) + "\n"


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(sc), encoding="utf-8")
