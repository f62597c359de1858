import random
import statistics

import pytest

from mrrt.geometry import Config, Disc, Workspace, segment_disc_collides
from mrrt.planner import (
    EXHAUSTED,
    PATH_FOUND,
    InvalidEndpointError,
    MainTreePlanner,
    MRRTPlanner,
    ObstacleSnapshot,
    PlannerParams,
    ScratchPlanner,
    make_planner,
    plan_initial,
)

from oracles import assert_path_valid, check_forest

W10 = Workspace(0, 0, 10, 10)
W20 = Workspace(0, 0, 20, 10)


class ScriptedRandom:
    """Stands in for ``random.Random``, replaying fixed values from ``random()``."""

    def __init__(self, values):
        self.values = list(values)

    def random(self):
        return self.values.pop(0)


def wall(x, y_from, y_to, spacing, radius=0.5, skip=()):
    discs, y = [], y_from
    while y <= y_to + 1e-9:
        if not any(lo < y < hi for lo, hi in skip):
            discs.append(Disc(Config(x, y), radius))
        y += spacing
    return discs


def test_params_defaults_and_validation():
    p = PlannerParams.for_workspace(W10)
    assert p.eta == pytest.approx(W10.diagonal / 20)
    assert p.neighbor_radius == pytest.approx(2 * p.eta)
    assert (p.goal_bias, p.sample_budget) == (0.05, 20_000)
    for bad in (dict(eta=0), dict(eta=1, goal_bias=1.0), dict(eta=1, neighbor_radius=0.5),
                dict(eta=1, sample_budget=0), dict(eta=1, inflation=-1)):
        with pytest.raises(ValueError):
            PlannerParams(**bad)


@pytest.mark.parametrize("discs", [(), (Disc(Config(5, 5), 2.0), Disc(Config(2.5, 7), 1.0))])
def test_plan_initial_paths_are_valid(discs):
    snap = ObstacleSnapshot(discs)
    params = PlannerParams.for_workspace(W10, sample_budget=10_000, inflation=0.1)
    for seed in range(50):
        out = plan_initial(Config(1, 1), Config(9, 9), snap, params.with_seed(seed), W10)
        assert out.status == PATH_FOUND
        assert_path_valid(out.path, (1, 1), (9, 9), discs, 0.1, params.eta)


def test_plan_initial_straight_line_in_open_space():
    params = PlannerParams.for_workspace(W10)
    out = plan_initial(Config(1, 1), Config(9, 9), ObstacleSnapshot(), params, W10)
    assert out.stats.samples_drawn == 0
    assert out.path.length == pytest.approx(8 * 2 ** 0.5)


def test_plan_initial_rejects_endpoint_in_obstacle():
    params = PlannerParams.for_workspace(W10)
    snap = ObstacleSnapshot([Disc(Config(9, 9), 0.5)])
    with pytest.raises(InvalidEndpointError):
        plan_initial(Config(1, 1), Config(9, 9), snap, params, W10)
    with pytest.raises(InvalidEndpointError):
        plan_initial(Config(9.2, 9), Config(1, 1), snap, params, W10)


def test_plan_initial_exhausts_budget_behind_sealed_wall():
    inflation = 0.2
    # adjacent discs leave 0.2 between boundaries, under 2 * inflation
    discs = wall(5.0, 0.0, 10.0, spacing=1.2)
    params = PlannerParams.for_workspace(W10, inflation=inflation, sample_budget=3000)
    out = plan_initial(Config(1, 5), Config(9, 5), ObstacleSnapshot(discs), params, W10)
    assert out.status == EXHAUSTED and out.path is None
    assert out.stats.samples_drawn == 3000


def grown_planner(seed, discs=(Disc(Config(10, 5), 1.5),), cls=MRRTPlanner, budget=20_000):
    params = PlannerParams.for_workspace(W20, inflation=0.3, sample_budget=budget, rng_seed=seed)
    planner = cls(W20, Config(19, 5), params)
    out = planner.plan_initial(Config(1, 5), ObstacleSnapshot(discs))
    assert out.found
    return planner


def test_sense_and_prune_identical_snapshot_is_idempotent():
    p = grown_planner(1)
    rep = p.sense_and_prune(p.snapshot)
    assert rep.edges_removed == 0 and rep.trees_created == 0


def test_sense_and_prune_cuts_edge_under_new_disc():
    p = grown_planner(2)
    a, b = p.path.configs[3], p.path.configs[4]
    mid = Config((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    snap = ObstacleSnapshot(p.snapshot.discs + (Disc(mid, 0.1),))
    rep = p.sense_and_prune(snap)
    assert rep.edges_removed >= 1 and rep.trees_created >= 1
    assert p.path is None
    check_forest(p.forest)


def test_sense_and_prune_matches_exhaustive_edge_check():
    rng = random.Random(4)
    for seed in range(20):
        p = grown_planner(seed)
        discs = p.snapshot.discs + tuple(
            Disc(Config(rng.uniform(2, 18), rng.uniform(0, 10)), rng.uniform(0.3, 1.5)) for _ in range(3))
        f = p.forest
        edges = list(f.edges())
        expected = {(u, v) for u, v in edges
                    if any(segment_disc_collides(f.config(u), f.config(v), d, 0.3) for d in discs)}
        nodes = set(f.nodes())
        p.sense_and_prune(ObstacleSnapshot(discs))
        assert set(edges) - set(f.edges()) == expected
        assert set(f.nodes()) == nodes
        check_forest(f)


def test_regrow_joins_two_trees_through_gap_in_one_sample():
    params = PlannerParams(eta=1.0, neighbor_radius=2.0, goal_bias=0.05)
    w = Workspace(-1, -1, 10, 10)
    # goal-bias draw, then x and y of the uniform sample landing at (2.75, 0)
    p = MRRTPlanner(w, Config(6, 0), params, rng=ScriptedRandom([0.5, 3.75 / 11, 1 / 11]))
    p.reset(Config(0, 0))
    f = p.forest
    n = p.robot_node
    for x in (1.0, 2.0):
        n = f.add_child(n, Config(x, 0))
    n = p.goal_node
    for x in (5.0, 4.0, 3.5):
        n = f.add_child(n, Config(x, 0))
    assert f.tree_count == 2
    out = p.regrow()
    assert out.status == PATH_FOUND
    assert out.stats.samples_drawn == 1
    assert f.tree_count == 1
    xs = [c[0] for c in out.path.configs]
    assert xs == pytest.approx([0, 1, 2, 2.75, 3.5, 4, 5, 6])
    check_forest(f)


def test_regrow_returns_immediately_when_connected():
    p = grown_planner(3)
    out = p.regrow()
    assert out.found and out.stats.samples_drawn == 0


def corridor_cut(seed):
    """Grown tree, then two discs land on the solution path on either side of the static disc."""
    p = grown_planner(seed)
    cs = p.path.configs
    cut = tuple(Disc(min(cs, key=lambda c: abs(c[0] - x)), 1.0) for x in (6.0, 14.0))
    return p, ObstacleSnapshot(p.snapshot.discs + cut)


def test_regrow_after_cut_needs_fewer_samples_than_scratch():
    mrrt, scratch = [], []
    for seed in range(50):
        p, snap = corridor_cut(seed)
        out = p.replan_cycle(snap, Config(1, 5))
        assert out.found
        assert out.stats.edges_pruned >= 1
        mrrt.append(out.stats.samples_drawn)
        fresh = plan_initial(Config(1, 5), Config(19, 5), snap, p.params.with_seed(seed + 1000), W20)
        assert fresh.found
        scratch.append(fresh.stats.samples_drawn)
    assert statistics.median(mrrt) < statistics.median(scratch)


def test_replan_cycle_cache_hit():
    p = grown_planner(5)
    out = p.replan_cycle(p.snapshot, Config(1, 5))
    assert out.found and out.stats.samples_drawn == 0 and out.stats.edges_pruned == 0


def test_replan_cycle_after_crossing_obstacle():
    for seed in range(10):
        p = grown_planner(seed)
        path = p.path
        k = len(path.configs) // 3
        crossing = Disc(path.configs[k], 0.5)
        snap = ObstacleSnapshot(p.snapshot.discs + (crossing,))
        out = p.replan_cycle(snap, Config(1, 5))
        assert out.stats.edges_pruned >= 1
        if out.found:
            assert_path_valid(out.path, (1, 5), (19, 5), snap.discs, 0.3, p.params.eta)
            assert p.forest.tree_of(p.robot_node) == p.forest.tree_of(p.goal_node)
        else:
            assert out.status == EXHAUSTED


def test_replan_cycle_robot_walled_in():
    p = grown_planner(7, budget=500)
    robot = Config(3, 5)
    ring = tuple(Disc(Config(3 + 1.0 * c, 5 + 1.0 * s), 0.5)
                 for c, s in [(1, 0), (0.7071, 0.7071), (0, 1), (-0.7071, 0.7071),
                              (-1, 0), (-0.7071, -0.7071), (0, -1), (0.7071, -0.7071)])
    out = p.replan_cycle(ObstacleSnapshot(p.snapshot.discs + ring), robot)
    assert out.status == EXHAUSTED and out.path is None
    f = p.forest
    assert f.tree_of(p.robot_node) != f.tree_of(p.goal_node)
    # nothing in the robot's tree lies outside the ring
    members = [n for n in f.nodes() if f.tree_of(n) == f.tree_of(p.robot_node)]
    assert all(((f.config(n)[0] - 3) ** 2 + (f.config(n)[1] - 5) ** 2) ** 0.5 < 1.0 for n in members)


def test_replan_cycle_rejects_robot_in_obstacle():
    p = grown_planner(8)
    with pytest.raises(InvalidEndpointError):
        p.replan_cycle(ObstacleSnapshot(p.snapshot.discs + (Disc(Config(1, 5), 0.2),)), Config(1, 5))


def test_scratch_baseline_discards_forest_every_cycle():
    static = ObstacleSnapshot((Disc(Config(10, 5), 1.5),))
    p = make_planner("scratch", W20, Config(19, 5), PlannerParams.for_workspace(W20, inflation=0.3))
    assert isinstance(p, ScratchPlanner)
    for _ in range(5):
        out = p.replan_cycle(static, Config(1, 5))
        assert out.found
        assert out.stats.trees_before == 0
        assert out.stats.samples_drawn > 0


def test_main_tree_baseline_drops_third_component():
    p = grown_planner(9, cls=MainTreePlanner)
    f = p.forest
    # cut the path twice so the robot side, the goal side and a middle piece separate
    c = p.path.configs
    i, j = len(c) // 3, 2 * len(c) // 3
    mids = [Config((c[k][0] + c[k + 1][0]) / 2, (c[k][1] + c[k + 1][1]) / 2) for k in (i, j)]
    middle_node = p.path.nodes[(i + j) // 2]
    snap = ObstacleSnapshot(p.snapshot.discs + tuple(Disc(m, 0.05) for m in mids))
    out = p.replan_cycle(snap, Config(1, 5))
    assert out.stats.nodes_deleted > 0
    assert middle_node not in f
    assert set(f.tree_labels()) == {f.tree_of(p.robot_node), f.tree_of(p.goal_node)}


def test_main_tree_matches_mrrt_without_pruning():
    static = ObstacleSnapshot((Disc(Config(10, 5), 1.5),))
    params = PlannerParams.for_workspace(W20, inflation=0.3, rng_seed=4)
    a = MRRTPlanner(W20, Config(19, 5), params)
    b = MainTreePlanner(W20, Config(19, 5), params)
    for robot in [Config(1, 5), Config(1, 5), Config(1.2, 5.1)]:
        oa = a.replan_cycle(static, robot)
        ob = b.replan_cycle(static, robot)
        assert oa.path == ob.path
        assert oa.stats.samples_drawn == ob.stats.samples_drawn
        assert ob.stats.nodes_deleted == 0


def test_determinism_same_seed_same_forest():
    def run(seed):
        p, snap = corridor_cut(seed)
        out = p.replan_cycle(snap, Config(1, 5))
        f = p.forest
        return out.path, [(n, f.config(n), f.parent(n)) for n in f.nodes()]

    assert run(11) == run(11)
    assert run(11) != run(12)


def test_mrrt_never_deletes_nodes():
    p, snap = corridor_cut(13)
    before = set(p.forest.nodes())
    out = p.replan_cycle(snap, Config(1, 5))
    assert before <= set(p.forest.nodes())
    assert out.stats.nodes_deleted == 0
