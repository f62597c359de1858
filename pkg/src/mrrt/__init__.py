"""Online replanning with a forest of disjoint rapidly-exploring random trees."""

from .forest import Forest, PruneReport
from .geometry import Config, Disc, Workspace
from .planner import (
    MainTreePlanner,
    MRRTPlanner,
    ObstacleSnapshot,
    Path,
    PlannerParams,
    ReplanOutcome,
    ScratchPlanner,
    make_planner,
    plan_initial,
)
from .simworld import Scenario, run_episode

__all__ = [
    "Config", "Disc", "Forest", "MainTreePlanner", "MRRTPlanner", "ObstacleSnapshot", "Path",
    "PlannerParams", "PruneReport", "ReplanOutcome", "Scenario", "ScratchPlanner", "Workspace",
    "make_planner", "plan_initial", "run_episode",
]
