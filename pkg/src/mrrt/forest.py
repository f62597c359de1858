"""Forest of disjoint trees over a shared node arena.

Nodes are addressed by dense integer ids that are never reused. Every node
carries a parent link (``-1`` for a root) and a tree label, which is always
the smallest node id of its connected component. Pruning removes edges only;
nodes survive as roots of new trees and stay available for reconnection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Set, Tuple

import numpy as np

from .geometry import Config
from .spatial_index import GridIndex

NO_PARENT = -1


class MissingNodeError(KeyError):
    pass


class MissingEdgeError(KeyError):
    pass


class CycleError(ValueError):
    """Raised when a merge would join a tree to itself."""


class DisconnectedError(ValueError):
    pass


@dataclass(frozen=True)
class PruneReport:
    edges_removed: int
    trees_created: int


class Forest:
    def __init__(self, cell_size: float):
        self.index = GridIndex(cell_size)
        self._xs: List[float] = []
        self._ys: List[float] = []
        self._parent: List[int] = []
        self._children: List[List[int]] = []
        self._tree: List[int] = []
        self._blocked: List[bool] = []
        self._alive: List[bool] = []
        self._roots: Set[int] = set()
        self._size = {}
        self._n_alive = 0

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return self._n_alive

    def __contains__(self, n) -> bool:
        return isinstance(n, (int, np.integer)) and 0 <= n < len(self._alive) and self._alive[n]

    @property
    def tree_count(self) -> int:
        return len(self._roots)

    @property
    def next_id(self) -> int:
        return len(self._alive)

    def nodes(self) -> Iterator[int]:
        return (n for n, a in enumerate(self._alive) if a)

    def roots(self) -> List[int]:
        return sorted(self._roots)

    def config(self, n: int) -> Config:
        self._check(n)
        return Config(self._xs[n], self._ys[n])

    def parent(self, n: int) -> Optional[int]:
        self._check(n)
        p = self._parent[n]
        return None if p == NO_PARENT else p

    def children(self, n: int) -> List[int]:
        self._check(n)
        return list(self._children[n])

    def tree_of(self, n: int) -> int:
        self._check(n)
        return self._tree[n]

    def tree_size(self, label: int) -> int:
        return self._size[label]

    def tree_labels(self) -> List[int]:
        return sorted(self._tree[r] for r in self._roots)

    def is_blocked(self, n: int) -> bool:
        self._check(n)
        return self._blocked[n]

    def is_eligible(self, n: int) -> bool:
        """Alive and not blocked; the default filter for connection queries."""
        return self._alive[n] and not self._blocked[n]

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield ``(parent, child)`` pairs in child-id order."""
        for c, p in enumerate(self._parent):
            if p != NO_PARENT and self._alive[c]:
                yield p, c

    @property
    def edge_count(self) -> int:
        return self._n_alive - len(self._roots)

    def edge_arrays(self):
        """Child ids and endpoint coordinates of every edge as numpy arrays."""
        parent = np.asarray(self._parent, dtype=np.int64)
        alive = np.asarray(self._alive, dtype=bool)
        child = np.nonzero((parent != NO_PARENT) & alive)[0]
        par = parent[child]
        xs = np.asarray(self._xs)
        ys = np.asarray(self._ys)
        return child, xs[par], ys[par], xs[child], ys[child]

    def coords(self):
        return np.asarray(self._xs), np.asarray(self._ys)

    def _check(self, n: int) -> None:
        if not (0 <= n < len(self._alive)) or not self._alive[n]:
            raise MissingNodeError(n)

    # -- growth ----------------------------------------------------------

    def _new_node(self, config: Config, parent: int, label: int) -> int:
        n = len(self._alive)
        self._xs.append(float(config[0]))
        self._ys.append(float(config[1]))
        self._parent.append(parent)
        self._children.append([])
        self._tree.append(label)
        self._blocked.append(False)
        self._alive.append(True)
        self._n_alive += 1
        self.index.insert(n, Config(self._xs[n], self._ys[n]))
        return n

    def add_root(self, config: Config) -> int:
        n = self._new_node(config, NO_PARENT, len(self._alive))
        self._roots.add(n)
        self._size[n] = 1
        return n

    def add_child(self, parent: int, config: Config) -> int:
        self._check(parent)
        label = self._tree[parent]
        n = self._new_node(config, parent, label)
        self._children[parent].append(n)
        self._size[label] += 1
        return n

    # -- structural edits ------------------------------------------------

    def _walk(self, root: int) -> List[int]:
        out = [root]
        children = self._children
        i = 0
        while i < len(out):
            out.extend(children[out[i]])
            i += 1
        return out

    def _root_of(self, n: int) -> int:
        parent = self._parent
        while parent[n] != NO_PARENT:
            n = parent[n]
        return n

    def _relabel_from(self, root: int) -> int:
        members = self._walk(root)
        label = min(members)
        tree = self._tree
        for m in members:
            tree[m] = label
        self._size[label] = len(members)
        return label

    def _unlink(self, child: int) -> None:
        p = self._parent[child]
        self._children[p].remove(child)
        self._parent[child] = NO_PARENT
        self._roots.add(child)

    def detach_edge(self, parent: int, child: int) -> None:
        self._check(parent)
        self._check(child)
        if self._parent[child] != parent:
            raise MissingEdgeError((parent, child))
        self.remove_edges([child])

    def remove_edges(self, children: Iterable[int]) -> int:
        """Cut the parent edge of each listed node, relabelling what split.

        Returns the number of edges removed.
        """
        cut = [c for c in dict.fromkeys(children) if self._parent[c] != NO_PARENT]
        if not cut:
            return 0
        old_labels = {self._tree[c] for c in cut}
        heads = [self._parent[c] for c in cut]
        for c in cut:
            self._unlink(c)
        for lab in old_labels:
            del self._size[lab]
        starts = dict.fromkeys(cut)
        for h in heads:
            starts[self._root_of(h)] = None
        for r in starts:
            self._relabel_from(r)
        return len(cut)

    def reroot(self, n: int) -> None:
        self._check(n)
        parent = self._parent
        children = self._children
        prev = NO_PARENT
        cur = n
        old_root = self._root_of(n)
        if old_root == n:
            return
        while cur != NO_PARENT:
            nxt = parent[cur]
            if nxt != NO_PARENT:
                children[nxt].remove(cur)
            parent[cur] = prev
            if prev != NO_PARENT:
                children[prev].append(cur)
            prev = cur
            cur = nxt
        self._roots.discard(old_root)
        self._roots.add(n)

    def merge(self, child_root: int, new_parent: int) -> None:
        self._check(child_root)
        self._check(new_parent)
        if self._parent[child_root] != NO_PARENT:
            raise ValueError(f"node {child_root} is not a root")
        a = self._tree[child_root]
        b = self._tree[new_parent]
        if a == b:
            raise CycleError(f"nodes {child_root} and {new_parent} share tree {a}")
        keep, drop = (a, b) if a < b else (b, a)
        start = child_root if drop == a else self._root_of(new_parent)
        tree = self._tree
        for m in self._walk(start):
            tree[m] = keep
        self._size[keep] += self._size.pop(drop)
        self._parent[child_root] = new_parent
        self._children[new_parent].append(child_root)
        self._roots.discard(child_root)

    def delete_tree(self, label: int) -> int:
        """Remove every node of one tree; returns the number removed."""
        roots = [r for r in self._roots if self._tree[r] == label]
        if not roots:
            raise MissingNodeError(label)
        root = roots[0]
        members = self._walk(root)
        for m in members:
            self._alive[m] = False
            self._children[m] = []
        self._roots.discard(root)
        del self._size[label]
        self._n_alive -= len(members)
        return len(members)

    def set_blocked(self, blocked) -> None:
        """Overwrite blocked flags from a sequence indexed by node id."""
        self._blocked = [bool(b) for b in blocked]
        if len(self._blocked) != len(self._alive):
            raise ValueError("blocked mask length does not match arena size")

    def prune_colliding_edges(
        self,
        edge_predicate: Callable[[Config, Config], bool],
        node_predicate: Optional[Callable[[Config], bool]] = None,
    ) -> PruneReport:
        """Remove exactly the edges for which ``edge_predicate`` holds.

        ``node_predicate``, when given, refreshes every node's blocked flag
        from the same obstacle state.
        """
        before = self.tree_count
        doomed = [c for p, c in self.edges()
                  if edge_predicate(self.config(p), self.config(c))]
        removed = self.remove_edges(doomed)
        if node_predicate is not None:
            self.set_blocked([a and node_predicate(Config(x, y))
                              for a, x, y in zip(self._alive, self._xs, self._ys)])
        return PruneReport(removed, self.tree_count - before)

    # -- extraction ------------------------------------------------------

    def path_between(self, a: int, b: int) -> List[int]:
        self._check(a)
        self._check(b)
        if self._tree[a] != self._tree[b]:
            raise DisconnectedError(f"nodes {a} and {b} are in different trees")
        parent = self._parent
        up_a = [a]
        seen = {a: 0}
        n = a
        while parent[n] != NO_PARENT:
            n = parent[n]
            seen[n] = len(up_a)
            up_a.append(n)
        up_b = [b]
        n = b
        while n not in seen:
            n = parent[n]
            up_b.append(n)
        return up_a[:seen[n]] + up_b[::-1]
