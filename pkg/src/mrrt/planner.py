"""Multi-tree replanning and the two replanning baselines.

:class:`MRRTPlanner` keeps every tree fragment that edge pruning produces and
reconnects fragments by sampling: each sample is attached to the nearest
eligible node and then bridged to every other fragment in its neighbourhood.
:class:`ScratchPlanner` throws the forest away every cycle, and
:class:`MainTreePlanner` keeps only the fragments holding the robot or goal.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from .forest import Forest, PruneReport
from .geometry import (
    Config,
    Disc,
    Workspace,
    dist,
    point_free,
    points_in_discs,
    sample_uniform,
    segment_free,
    segments_hit_discs,
    steer,
)

PATH_FOUND = "path_found"
EXHAUSTED = "exhausted_budget"

VARIANTS = ("mrrt", "scratch", "main_tree")


class InvalidEndpointError(ValueError):
    """Start, goal or robot configuration lies inside a known obstacle."""


@dataclass(frozen=True)
class PlannerParams:
    eta: float
    goal_bias: float = 0.05
    neighbor_radius: Optional[float] = None
    sample_budget: int = 20_000
    inflation: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.neighbor_radius is None:
            object.__setattr__(self, "neighbor_radius", 2.0 * self.eta)
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not 0 <= self.goal_bias < 1:
            raise ValueError(f"goal_bias must lie in [0, 1), got {self.goal_bias}")
        if not self.neighbor_radius >= self.eta:
            raise ValueError("neighbor_radius must be at least eta")
        if not self.sample_budget > 0:
            raise ValueError("sample_budget must be positive")
        if not self.inflation >= 0:
            raise ValueError("inflation must be non-negative")

    @classmethod
    def for_workspace(cls, workspace: Workspace, **overrides) -> "PlannerParams":
        """Conventional defaults: step of 1/20 of the workspace diagonal."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        overrides.setdefault("eta", workspace.diagonal / 20.0)
        return cls(**overrides)

    def with_seed(self, seed: int) -> "PlannerParams":
        return replace(self, rng_seed=seed)


@dataclass(frozen=True)
class ObstacleSnapshot:
    discs: Tuple[Disc, ...] = ()
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "discs", tuple(self.discs))


@dataclass(frozen=True)
class Path:
    configs: Tuple[Config, ...]
    nodes: Tuple[int, ...] = ()

    @property
    def length(self) -> float:
        c = self.configs
        return sum(dist(c[i], c[i + 1]) for i in range(len(c) - 1))

    def is_valid(self, snapshot: ObstacleSnapshot, inflation: float) -> bool:
        c = self.configs
        if len(c) == 1:
            return point_free(c[0], snapshot.discs, inflation)
        return all(segment_free(c[i], c[i + 1], snapshot.discs, inflation)
                   for i in range(len(c) - 1))


@dataclass
class ReplanStats:
    samples_drawn: int = 0
    edges_pruned: int = 0
    trees_before: int = 0
    trees_after: int = 0
    connect_attempts: int = 0
    elapsed: float = 0.0
    nodes_before: int = 0
    nodes_after: int = 0
    nodes_deleted: int = 0


@dataclass
class ReplanOutcome:
    status: str
    path: Optional[Path] = None
    stats: ReplanStats = field(default_factory=ReplanStats)

    @property
    def found(self) -> bool:
        return self.status == PATH_FOUND


class MRRTPlanner:
    name = "mrrt"

    def __init__(self, workspace: Workspace, goal: Config, params: PlannerParams,
                 rng: Optional[random.Random] = None):
        self.workspace = workspace
        self.goal = Config(float(goal[0]), float(goal[1]))
        self.params = params
        self.rng = rng if rng is not None else random.Random(params.rng_seed)
        self.forest: Optional[Forest] = None
        self.robot_node: Optional[int] = None
        self.goal_node: Optional[int] = None
        self.path: Optional[Path] = None
        self.snapshot = ObstacleSnapshot()
        self.last_pruned: List[Tuple[Config, Config]] = []

    # -- shared helpers --------------------------------------------------

    def reset(self, start: Config) -> None:
        """Fresh forest holding only the start root and the goal root."""
        self.forest = Forest(cell_size=self.params.eta)
        self.robot_node = self.forest.add_root(start)
        self.goal_node = self.forest.add_root(self.goal)
        self.path = None

    def _free(self, a: Config, b: Config) -> bool:
        return segment_free(a, b, self.snapshot.discs, self.params.inflation)

    def _refresh_blocked(self) -> None:
        xs, ys = self.forest.coords()
        self.forest.set_blocked(points_in_discs(xs, ys, self.snapshot.discs, self.params.inflation))

    def _draw(self) -> Config:
        if self.rng.random() < self.params.goal_bias:
            return self.goal
        return sample_uniform(self.workspace, self.rng)

    def _connected(self) -> bool:
        f = self.forest
        return f.tree_of(self.robot_node) == f.tree_of(self.goal_node)

    def _extract(self) -> Path:
        ids = self.forest.path_between(self.robot_node, self.goal_node)
        return Path(tuple(self.forest.config(n) for n in ids), tuple(ids))

    def _extend(self, n: int, q: Config, stats: ReplanStats) -> Optional[int]:
        """Grow one steer step from node ``n`` toward ``q``.

        Returns the node standing at the end of the step, which is ``n``
        itself when ``q`` coincides with it, or None if the step is blocked.
        """
        nc = self.forest.config(n)
        if nc == q:
            return n
        new = steer(nc, q, self.params.eta)
        stats.connect_attempts += 1
        if not self._free(nc, new):
            return None
        return self.forest.add_child(n, new)

    def _bridge(self, hub: int, other: int) -> None:
        """Join ``other``'s tree beneath ``hub`` over a pre-checked segment.

        Segments longer than eta are split into collinear pieces so every
        tree edge stays within one steer step.
        """
        f = self.forest
        f.reroot(other)
        a = f.config(hub)
        b = f.config(other)
        pieces = max(1, math.ceil(dist(a, b) / self.params.eta - 1e-12))
        tail = hub
        for k in range(1, pieces):
            s = k / pieces
            tail = f.add_child(tail, Config(a[0] + (b[0] - a[0]) * s, a[1] + (b[1] - a[1]) * s))
        f.merge(other, tail)

    # -- initial planning ------------------------------------------------

    def plan_initial(self, start: Config, snapshot: ObstacleSnapshot) -> ReplanOutcome:
        """Goal-biased single-tree RRT from ``start`` toward the goal root."""
        t0 = time.perf_counter()
        start = Config(float(start[0]), float(start[1]))
        inflation = self.params.inflation
        if not point_free(start, snapshot.discs, inflation):
            raise InvalidEndpointError(f"start {start} is inside a known obstacle")
        if not point_free(self.goal, snapshot.discs, inflation):
            raise InvalidEndpointError(f"goal {self.goal} is inside a known obstacle")
        self.snapshot = snapshot
        self.reset(start)
        f = self.forest
        stats = ReplanStats(trees_before=0, nodes_before=0)
        goal, goal_node, eta = self.goal, self.goal_node, self.params.eta
        start_tree = f.tree_of(self.robot_node)

        def keep(i):
            return f.is_eligible(i) and f.tree_of(i) == start_tree

        def try_goal(n: int) -> bool:
            nc = f.config(n)
            if dist(nc, goal) <= eta:
                stats.connect_attempts += 1
                if self._free(nc, goal):
                    f.merge(goal_node, n)
                    return True
            return False

        done = try_goal(self.robot_node) or self._straight_to_goal(stats)
        while not done and stats.samples_drawn < self.params.sample_budget:
            q = self._draw()
            stats.samples_drawn += 1
            n = f.index.nearest(q, keep)
            nc = f.config(n)
            if nc == q:
                continue
            new = steer(nc, q, eta)
            if new == goal:
                done = try_goal(n)
                continue
            stats.connect_attempts += 1
            if not self._free(nc, new):
                continue
            done = try_goal(f.add_child(n, new))
        return self._finish(stats, t0)

    def _straight_to_goal(self, stats: ReplanStats) -> bool:
        """Connect start to goal along the straight segment when it is free."""
        a, b = self.forest.config(self.robot_node), self.goal
        stats.connect_attempts += 1
        if a == b or not self._free(a, b):
            return False
        self._bridge(self.robot_node, self.goal_node)
        return True

    def _finish(self, stats: ReplanStats, t0: float) -> ReplanOutcome:
        stats.trees_after = self.forest.tree_count
        stats.nodes_after = len(self.forest)
        if self._connected():
            self.path = self._extract()
            out = ReplanOutcome(PATH_FOUND, self.path, stats)
        else:
            self.path = None
            out = ReplanOutcome(EXHAUSTED, None, stats)
        stats.elapsed = time.perf_counter() - t0
        return out

    # -- replanning ------------------------------------------------------

    def sense_and_prune(self, snapshot: ObstacleSnapshot) -> PruneReport:
        """Cut every edge touching a known obstacle and refresh blocked flags."""
        self.snapshot = snapshot
        f = self.forest
        child, ax, ay, bx, by = f.edge_arrays()
        hit = segments_hit_discs(ax, ay, bx, by, snapshot.discs, self.params.inflation)
        doomed = child[hit].tolist()
        self.last_pruned = [(f.config(f.parent(c)), f.config(c)) for c in doomed]
        before = f.tree_count
        removed = f.remove_edges(doomed)
        self._refresh_blocked()
        if self.path is not None and not self.path.is_valid(snapshot, self.params.inflation):
            self.path = None
        return PruneReport(removed, f.tree_count - before)

    def regrow(self, stats: Optional[ReplanStats] = None) -> ReplanOutcome:
        """Sample until the robot and goal trees meet or the budget runs out."""
        t0 = time.perf_counter()
        stats = stats if stats is not None else ReplanStats(
            trees_before=self.forest.tree_count, nodes_before=len(self.forest))
        f = self.forest
        r_n = self.params.neighbor_radius
        eligible = f.is_eligible
        while not self._connected() and stats.samples_drawn < self.params.sample_budget:
            q = self._draw()
            stats.samples_drawn += 1
            hits = f.index.within_radius(q, r_n, eligible)
            if not hits:
                n = f.index.nearest(q, eligible)
                if n is not None:
                    self._extend(n, q, stats)
                continue
            # nearest hit of each tree, in (distance, id) order
            reps, seen = [], set()
            for n in hits:
                t = f.tree_of(n)
                if t not in seen:
                    seen.add(t)
                    reps.append(n)
            hub = None
            for i, n in enumerate(reps):
                hub = self._extend(n, q, stats)
                if hub is not None:
                    break
            if hub is None:
                continue
            hc = f.config(hub)
            for m in reps[i + 1:]:
                if f.tree_of(m) == f.tree_of(hub):
                    continue
                mc = f.config(m)
                if dist(mc, hc) > r_n:
                    continue
                stats.connect_attempts += 1
                if self._free(mc, hc):
                    self._bridge(hub, m)
        return self._finish(stats, t0)

    def _attach_robot(self, robot: Config) -> None:
        f = self.forest
        if self.robot_node is not None and f.config(self.robot_node) == robot:
            return
        target = None
        if self.path is not None:
            # prefer the waypoint ahead on the current path so the robot
            # never doubles back to a node it has already passed
            target = self._next_waypoint(robot)
        if target is None:
            for n in f.index.within_radius(robot, self.params.eta, f.is_eligible):
                if self._free(f.config(n), robot):
                    target = n
                    break
        if target is None:
            self.robot_node = f.add_root(robot)
        else:
            self.robot_node = f.add_child(target, robot)

    def _next_waypoint(self, robot: Config) -> Optional[int]:
        f = self.forest
        c, ids = self.path.configs, self.path.nodes
        for i in range(len(c) - 1):
            a, b = c[i], c[i + 1]
            if abs(dist(a, robot) + dist(robot, b) - dist(a, b)) <= 1e-9 * max(1.0, dist(a, b)):
                n = ids[i + 1]
                if (n in f and f.is_eligible(n) and dist(b, robot) <= self.params.eta
                        and self._free(b, robot)):
                    return n
                return None
        return None

    def _after_prune(self, stats: ReplanStats) -> None:
        """Hook for variants that discard structure after pruning."""

    def replan_cycle(self, snapshot: ObstacleSnapshot, robot: Config) -> ReplanOutcome:
        t0 = time.perf_counter()
        robot = Config(float(robot[0]), float(robot[1]))
        if not point_free(robot, snapshot.discs, self.params.inflation):
            raise InvalidEndpointError(f"robot {robot} is inside a known obstacle")
        if self.forest is None:
            out = self.plan_initial(robot, snapshot)
            out.stats.elapsed = time.perf_counter() - t0
            return out
        report = self.sense_and_prune(snapshot)
        self._attach_robot(robot)
        stats = ReplanStats(edges_pruned=report.edges_removed)
        self._after_prune(stats)
        stats.trees_before = self.forest.tree_count
        stats.nodes_before = len(self.forest)
        out = self.regrow(stats)
        out.stats.elapsed = time.perf_counter() - t0
        return out


class MainTreePlanner(MRRTPlanner):
    """Keeps only the trees holding the robot and the goal after pruning."""

    name = "main_tree"

    def _after_prune(self, stats: ReplanStats) -> None:
        f = self.forest
        keep = {f.tree_of(self.robot_node), f.tree_of(self.goal_node)}
        for label in f.tree_labels():
            if label not in keep:
                stats.nodes_deleted += f.delete_tree(label)


class ScratchPlanner(MRRTPlanner):
    """Discards the whole forest and replans from the robot every cycle."""

    name = "scratch"

    def replan_cycle(self, snapshot: ObstacleSnapshot, robot: Config) -> ReplanOutcome:
        t0 = time.perf_counter()
        nodes_before = len(self.forest) if self.forest is not None else 0
        self.forest = None
        out = self.plan_initial(robot, snapshot)
        out.stats.nodes_deleted = nodes_before
        out.stats.elapsed = time.perf_counter() - t0
        return out


def make_planner(variant: str, workspace: Workspace, goal: Config, params: PlannerParams) -> MRRTPlanner:
    try:
        cls = {"mrrt": MRRTPlanner, "scratch": ScratchPlanner, "main_tree": MainTreePlanner}[variant]
    except KeyError:
        raise ValueError(f"unknown planner variant {variant!r}; expected one of {VARIANTS}") from None
    return cls(workspace, goal, params)


def plan_initial(start: Config, goal: Config, snapshot: ObstacleSnapshot,
                 params: PlannerParams, workspace: Workspace) -> ReplanOutcome:
    return MRRTPlanner(workspace, goal, params).plan_initial(start, snapshot)
