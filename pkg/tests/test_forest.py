import random

import pytest

from mrrt.forest import CycleError, DisconnectedError, Forest, MissingEdgeError, MissingNodeError
from mrrt.geometry import Config, Disc, segment_disc_collides

from oracles import check_forest, flood_components, forest_snapshot


def chain(n=3):
    f = Forest(1.0)
    ids = [f.add_root(Config(0, 0))]
    for k in range(1, n):
        ids.append(f.add_child(ids[-1], Config(k, 0)))
    return f, ids


def test_add_root():
    f = Forest(1.0)
    a = f.add_root(Config(0, 0))
    assert a == 0 and f.tree_count == 1
    b = f.add_root(Config(1, 1))
    assert f.tree_count == 2 and f.tree_of(a) != f.tree_of(b)
    assert f.path_between(a, a) == [a]


def test_add_child_chain():
    f, ids = chain(4)
    assert f.tree_count == 1 and len(f) == 4
    assert all(f.tree_of(i) == f.tree_of(ids[0]) for i in ids)
    with pytest.raises(MissingNodeError):
        f.add_child(99, Config(0, 0))


def test_detach_edge():
    f, (a, b, c) = chain(3)
    f.detach_edge(b, c)
    assert f.tree_count == 2
    assert f.tree_of(a) == f.tree_of(b) != f.tree_of(c)
    assert f.parent(c) is None
    with pytest.raises(MissingEdgeError):
        f.detach_edge(b, c)
    check_forest(f)


def test_detach_relabels_parent_side_when_minimum_moves():
    f = Forest(1.0)
    r = f.add_root(Config(5, 5))
    # give the parent side a larger minimum than the child side by rerooting
    kids = [f.add_child(r, Config(5, k)) for k in range(3)]
    f.reroot(kids[2])
    f.detach_edge(r, kids[0])
    check_forest(f)
    assert f.tree_of(kids[0]) == kids[0]
    assert f.tree_of(kids[2]) == r


def test_reroot():
    f, (a, b, c) = chain(3)
    label = f.tree_of(a)
    f.reroot(c)
    assert f.parent(c) is None and f.parent(b) == c and f.parent(a) == b
    assert f.tree_of(a) == label
    f.reroot(c)
    assert f.parent(c) is None
    check_forest(f)


def test_merge():
    f = Forest(1.0)
    a = f.add_root(Config(0, 0))
    b = f.add_root(Config(1, 0))
    f.merge(b, a)
    assert f.tree_count == 1 and len(f) == 2 and f.parent(b) == a
    with pytest.raises(CycleError):
        f.merge(a, b)


def test_merge_within_tree_rejected():
    f, (a, b, c) = chain(3)
    with pytest.raises(CycleError):
        f.merge(a, c)


def test_merge_requires_root():
    f, (a, b, c) = chain(3)
    d = f.add_root(Config(9, 9))
    with pytest.raises(ValueError):
        f.merge(b, d)


def test_prune_identity_and_total():
    f, ids = chain(6)
    rep = f.prune_colliding_edges(lambda p, q: False)
    assert (rep.edges_removed, rep.trees_created) == (0, 0) and f.tree_count == 1
    rep = f.prune_colliding_edges(lambda p, q: True)
    assert rep.edges_removed == 5 and rep.trees_created == 5
    assert f.tree_count == 6 and len(f) == 6
    check_forest(f)


def test_prune_refreshes_blocked_flags():
    f, ids = chain(4)
    d = Disc(Config(2, 0), 0.2)
    f.prune_colliding_edges(lambda p, q: segment_disc_collides(p, q, d),
                            lambda p: (p[0] - 2) ** 2 + p[1] ** 2 <= 0.04)
    assert [f.is_blocked(i) for i in ids] == [False, False, True, False]
    assert not f.is_eligible(ids[2])


def test_path_between():
    f, (a, b, c) = chain(3)
    assert f.path_between(a, c) == [a, b, c]
    assert f.path_between(c, a) == [c, b, a]
    assert f.path_between(b, b) == [b]
    g = Forest(1.0)
    s = g.add_root(Config(0, 0))
    u = g.add_child(s, Config(1, 0))
    v = g.add_child(s, Config(-1, 0))
    assert g.path_between(u, v) == [u, s, v]
    x = g.add_root(Config(5, 5))
    with pytest.raises(DisconnectedError):
        g.path_between(u, x)


def test_delete_tree():
    f, (a, b, c) = chain(3)
    d = f.add_root(Config(7, 7))
    e = f.add_child(d, Config(7, 8))
    assert f.delete_tree(f.tree_of(d)) == 2
    assert len(f) == 3 and f.tree_count == 1
    assert d not in f and e not in f
    assert list(f.edges()) == [(a, b), (b, c)]
    assert f.index.nearest(Config(7, 7), f.is_eligible) == c


def random_ops(f, rng, n_ops, check_each=True):
    """Apply a random mix of forest mutations, checking every invariant after each."""
    for _ in range(n_ops):
        nodes = list(f.nodes())
        op = rng.random()
        count_before = len(f)
        if not nodes or op < 0.1:
            f.add_root(Config(rng.uniform(0, 10), rng.uniform(0, 10)))
        elif op < 0.5:
            f.add_child(rng.choice(nodes), Config(rng.uniform(0, 10), rng.uniform(0, 10)))
        elif op < 0.65:
            edges = list(f.edges())
            if edges:
                f.detach_edge(*rng.choice(edges))
        elif op < 0.8:
            roots = f.roots()
            r = rng.choice(roots)
            others = [n for n in nodes if f.tree_of(n) != f.tree_of(r)]
            if others:
                f.merge(r, rng.choice(others))
        elif op < 0.92:
            f.reroot(rng.choice(nodes))
        else:
            d = Disc(Config(rng.uniform(0, 10), rng.uniform(0, 10)), rng.uniform(0.2, 2.5))
            pred = lambda p, q: segment_disc_collides(p, q, d)
            edges = list(f.edges())
            expected = {(p, c) for p, c in edges if segment_disc_collides(f.config(p), f.config(c), d)}
            rep = f.prune_colliding_edges(pred)
            after = set(f.edges())
            assert set(edges) - after == expected
            assert rep.edges_removed == len(expected)
            assert len(f) == count_before
        if check_each:
            check_forest(f)


def test_random_mutation_sequences_match_flood_fill():
    rng = random.Random(11)
    for _ in range(100):
        random_ops(Forest(rng.choice([0.5, 1.0, 2.0])), rng, 60)


def test_reroot_and_merge_preserve_undirected_edges():
    rng = random.Random(5)
    for _ in range(200):
        f = Forest(1.0)
        random_ops(f, rng, 40, check_each=False)
        before = {frozenset(e) for e in f.edges()}
        n = rng.choice(list(f.nodes()))
        f.reroot(n)
        assert {frozenset(e) for e in f.edges()} == before
        assert f.parent(n) is None
        roots = f.roots()
        if len(roots) > 1:
            r = roots[0]
            target = next(x for x in f.nodes() if f.tree_of(x) != f.tree_of(r))
            f.merge(r, target)
            assert {frozenset(e) for e in f.edges()} == before | {frozenset((r, target))}
        check_forest(f)


def test_path_between_is_simple_tree_walk():
    rng = random.Random(9)
    for _ in range(200):
        f = Forest(1.0)
        random_ops(f, rng, 50, check_each=False)
        nodes, parent, edges = forest_snapshot(f)
        undirected = {frozenset(e) for e in edges}
        comp = flood_components(nodes, edges)
        a, b = rng.choice(nodes), rng.choice(nodes)
        if comp[a] != comp[b]:
            with pytest.raises(DisconnectedError):
                f.path_between(a, b)
            continue
        path = f.path_between(a, b)
        assert path[0] == a and path[-1] == b
        assert len(set(path)) == len(path)
        assert all(frozenset(path[i:i + 2]) in undirected for i in range(len(path) - 1))
