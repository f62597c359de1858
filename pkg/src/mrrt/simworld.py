"""Discrete-time 2D world: moving discs, a range-limited sensor, and a point
robot that follows whatever path the planner last produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .geometry import Config, Disc, Workspace, dist, point_in_disc
from .planner import (
    InvalidEndpointError,
    MRRTPlanner,
    ObstacleSnapshot,
    Path,
    PlannerParams,
    ReplanOutcome,
    make_planner,
)

REACHED_GOAL = "reached_goal"
COLLIDED = "collided"
TIMEOUT = "timeout"


class ConfigurationError(ValueError):
    """Scenario is malformed or its start/goal is not collision-free."""


@dataclass(frozen=True)
class Motion:
    kind: str = "static"
    velocity: Tuple[float, float] = (0.0, 0.0)
    waypoints: Tuple[Config, ...] = ()
    speed: float = 0.0

    def __post_init__(self):
        if self.kind not in ("static", "linear", "waypoints"):
            raise ConfigurationError(f"unknown motion kind {self.kind!r}")
        if self.speed < 0:
            raise ConfigurationError("waypoint speed must be non-negative")
        if self.kind == "waypoints" and len(self.waypoints) < 2:
            raise ConfigurationError("waypoint motion needs at least two waypoints")


def _fold(x: float, lo: float, hi: float) -> float:
    """Position of a point bouncing between ``lo`` and ``hi`` after free travel to ``x``."""
    span = hi - lo
    if span <= 0:
        return lo
    u = (x - lo) % (2 * span)
    return lo + (u if u <= span else 2 * span - u)


@dataclass(frozen=True)
class ObstacleSpec:
    disc: Disc
    motion: Motion = Motion()
    known: bool = True

    @property
    def is_static(self) -> bool:
        return self.motion.kind == "static"

    def position_at(self, t: float, workspace: Workspace) -> Config:
        """Closed-form centre at time ``t``; starting position is ``disc.center``."""
        c = self.disc.center
        m = self.motion
        if m.kind == "static":
            return c
        if m.kind == "linear":
            r = self.disc.radius
            # reflect the disc, not its centre, off the walls
            lo_x, hi_x = workspace.min_x + r, workspace.max_x - r
            lo_y, hi_y = workspace.min_y + r, workspace.max_y - r
            x = c[0] + m.velocity[0] * t
            y = c[1] + m.velocity[1] * t
            if lo_x <= c[0] <= hi_x:
                x = _fold(x, lo_x, hi_x)
            if lo_y <= c[1] <= hi_y:
                y = _fold(y, lo_y, hi_y)
            return Config(x, y)
        pts = m.waypoints
        legs = [dist(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
        total = sum(legs)
        if total == 0 or m.speed == 0:
            return pts[0]
        s = (m.speed * t) % total
        for i, leg in enumerate(legs):
            if s <= leg and leg > 0:
                a, b = pts[i], pts[(i + 1) % len(pts)]
                f = s / leg
                return Config(a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f)
            s -= leg
        return pts[0]


@dataclass(frozen=True)
class Robot:
    config: Config
    speed: float
    radius: float = 0.0

    def __post_init__(self):
        if not self.speed > 0:
            raise ConfigurationError("robot speed must be positive")
        if self.radius < 0:
            raise ConfigurationError("robot radius must be non-negative")


@dataclass(frozen=True)
class Sensor:
    range: float

    def __post_init__(self):
        if not self.range > 0:
            raise ConfigurationError("sensor range must be positive")


@dataclass
class Scenario:
    workspace: Workspace
    start: Config
    goal: Config
    robot_speed: float
    robot_radius: float
    sensor_range: float
    planner: PlannerParams
    obstacles: List[ObstacleSpec] = field(default_factory=list)
    dt: float = 0.1
    horizon: int = 1000
    seeds: List[int] = field(default_factory=lambda: [0])
    goal_tolerance: Optional[float] = None
    sweep_substeps: int = 10
    forget_unseen: bool = False
    name: str = "scenario"

    @property
    def tolerance(self) -> float:
        return self.planner.eta if self.goal_tolerance is None else self.goal_tolerance

    def validate(self) -> None:
        w = self.workspace
        for label, p in (("start", self.start), ("goal", self.goal)):
            if not w.contains(p):
                raise ConfigurationError(f"{label} {tuple(p)} lies outside the workspace")
            for i, ob in enumerate(self.obstacles):
                if point_in_disc(p, Disc(ob.position_at(0.0, w), ob.disc.radius), self.robot_radius):
                    raise ConfigurationError(f"{label} collides with obstacle {i} at t=0")
        if not self.dt > 0:
            raise ConfigurationError("sim.dt must be positive")
        if self.horizon < 0:
            raise ConfigurationError("sim.horizon must be non-negative")
        if self.sweep_substeps < 1:
            raise ConfigurationError("sim.sweep_substeps must be at least 1")
        Robot(self.start, self.robot_speed, self.robot_radius)
        Sensor(self.sensor_range)


class World:
    """Ground-truth obstacle state plus the robot's accumulated knowledge."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.workspace = scenario.workspace
        self.specs = list(scenario.obstacles)
        self.t = 0.0
        self.positions = [ob.position_at(0.0, self.workspace) for ob in self.specs]
        self.memory: Dict[int, Config] = {}

    def advance_obstacles(self, t: float, dt: float) -> None:
        if not dt > 0:
            raise ValueError("dt must be positive")
        self.t = t + dt
        self.positions = [ob.position_at(self.t, self.workspace) for ob in self.specs]

    def true_discs(self, t: Optional[float] = None) -> List[Disc]:
        if t is None:
            return [Disc(p, ob.disc.radius) for ob, p in zip(self.specs, self.positions)]
        return [Disc(ob.position_at(t, self.workspace), ob.disc.radius) for ob in self.specs]

    def sense(self, robot: Config, sensor: Sensor) -> ObstacleSnapshot:
        discs = []
        for i, (ob, p) in enumerate(zip(self.specs, self.positions)):
            if ob.known:
                discs.append(Disc(p, ob.disc.radius))
                continue
            if dist(p, robot) <= sensor.range + ob.disc.radius:
                self.memory[i] = p
            elif not ob.is_static and self.scenario.forget_unseen:
                self.memory.pop(i, None)
            if i in self.memory:
                discs.append(Disc(self.memory[i], ob.disc.radius))
        return ObstacleSnapshot(tuple(discs), self.t)


def execute_step(robot: Config, speed: float, path: Optional[Path], dt: float) -> Config:
    """Advance ``speed * dt`` metres along ``path``; hold position without one."""
    if path is None or len(path.configs) < 2:
        return robot
    budget = speed * dt
    pos = Config(*robot)
    for nxt in path.configs[1:]:
        d = dist(pos, nxt)
        if d >= budget:
            if d == 0:
                return nxt
            f = budget / d
            return Config(pos[0] + (nxt[0] - pos[0]) * f, pos[1] + (nxt[1] - pos[1]) * f)
        budget -= d
        pos = nxt
    return pos


def evade_step(robot: Config, speed: float, snapshot: ObstacleSnapshot, inflation: float,
               dt: float, workspace: Workspace) -> Config:
    """Back straight out of the inflated known obstacles the robot is inside.

    The push direction weights each offending disc by its penetration depth.
    Used only when the planner refuses to plan from inside the safety margin.
    """
    px = py = 0.0
    for d in snapshot.discs:
        dx = robot[0] - d.center[0]
        dy = robot[1] - d.center[1]
        r = math.hypot(dx, dy)
        depth = d.radius + inflation - r
        if depth < 0 or r == 0:
            continue
        px += dx / r * depth
        py += dy / r * depth
    norm = math.hypot(px, py)
    if norm == 0:
        return robot
    step = speed * dt
    return workspace.clamp(Config(robot[0] + px / norm * step, robot[1] + py / norm * step))


def swept_collision(world: World, a: Config, b: Config, t0: float, dt: float,
                    radius: float, substeps: int) -> bool:
    """Robot moving ``a -> b`` over ``[t0, t0 + dt]`` against true obstacles."""
    for j in range(substeps + 1):
        s = j / substeps
        p = Config(a[0] + (b[0] - a[0]) * s, a[1] + (b[1] - a[1]) * s)
        for d in world.true_discs(t0 + dt * s):
            if point_in_disc(p, d, radius):
                return True
    return False


@dataclass
class EpisodeResult:
    status: str
    steps: int
    distance_traveled: float
    cycles: List[Optional[dict]]
    trace: List[dict]
    seed: int = 0
    variant: str = "mrrt"


Observer = Callable[[int, MRRTPlanner, Optional[ReplanOutcome], ObstacleSnapshot], None]


def run_episode(scenario: Scenario, variant: str = "mrrt", seed: int = 0,
                horizon: Optional[int] = None, record_forest: bool = False,
                observer: Optional[Observer] = None) -> EpisodeResult:
    """Simulate one episode: sense, replan and move once per step."""
    from .trace import make_event

    scenario.validate()
    horizon = scenario.horizon if horizon is None else horizon
    params = scenario.planner.with_seed(seed)
    planner = make_planner(variant, scenario.workspace, scenario.goal, params)
    world = World(scenario)
    sensor = Sensor(scenario.sensor_range)
    dt = scenario.dt
    robot = Config(*scenario.start)
    traveled = 0.0
    cycles: List[Optional[dict]] = []
    trace: List[dict] = []
    status = TIMEOUT
    steps = 0
    for k in range(horizon):
        if k > 0:
            world.advance_obstacles((k - 1) * dt, dt)
        t = k * dt
        snapshot = world.sense(robot, sensor)
        try:
            outcome = planner.replan_cycle(snapshot, robot)
        except InvalidEndpointError:
            outcome = None
        if observer is not None:
            observer(k, planner, outcome, snapshot)
        if outcome is None:
            nxt = evade_step(robot, scenario.robot_speed, snapshot, params.inflation,
                             dt, scenario.workspace)
        else:
            nxt = execute_step(robot, scenario.robot_speed, outcome.path, dt)
        traveled += dist(robot, nxt)
        steps = k + 1
        if swept_collision(world, robot, nxt, t, dt, scenario.robot_radius, scenario.sweep_substeps):
            status, kind = COLLIDED, "collision"
        elif dist(nxt, scenario.goal) <= scenario.tolerance:
            status, kind = REACHED_GOAL, "goal"
        elif k == horizon - 1:
            kind = "timeout"
        elif outcome is not None and outcome.stats.edges_pruned > 0:
            kind = "prune"
        else:
            kind = "replan"
        cycles.append(None if outcome is None else vars(outcome.stats).copy())
        trace.append(make_event(
            k, t, robot, nxt, snapshot, outcome, kind,
            true_obstacles=[(d, ob.known) for d, ob in zip(world.true_discs(), world.specs)],
            goal=scenario.goal, workspace=scenario.workspace,
            forest=planner.forest if record_forest else None))
        robot = nxt
        if status != TIMEOUT:
            break
    return EpisodeResult(status, steps, traveled, cycles, trace, seed, variant)
