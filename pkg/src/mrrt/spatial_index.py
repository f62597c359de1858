"""Bucketed uniform-grid point index.

Entries are never removed; callers hide stale or ineligible entries with the
``keep`` predicate passed to each query. Every query breaks distance ties by
the smaller id so results are reproducible.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .geometry import Config

Predicate = Optional[Callable[[int], bool]]


class DuplicateKeyError(KeyError):
    pass


class GridIndex:
    def __init__(self, cell_size: float):
        if not cell_size > 0:
            raise ValueError(f"cell_size must be positive, got {cell_size}")
        self.cell_size = float(cell_size)
        self._cells: Dict[Tuple[int, int], List[int]] = {}
        self._pos: Dict[int, Config] = {}
        self._lo = [0, 0]
        self._hi = [-1, -1]

    def __len__(self) -> int:
        return len(self._pos)

    def __contains__(self, node_id) -> bool:
        return node_id in self._pos

    def position(self, node_id: int) -> Config:
        return self._pos[node_id]

    def ids(self) -> Iterator[int]:
        return iter(self._pos)

    def _cell(self, x: float, y: float) -> Tuple[int, int]:
        return math.floor(x / self.cell_size), math.floor(y / self.cell_size)

    def insert(self, node_id: int, position: Config) -> None:
        if node_id in self._pos:
            raise DuplicateKeyError(node_id)
        p = Config(float(position[0]), float(position[1]))
        self._pos[node_id] = p
        key = self._cell(p.x, p.y)
        bucket = self._cells.get(key)
        if bucket is None:
            self._cells[key] = [node_id]
        else:
            bucket.append(node_id)
        if len(self._pos) == 1:
            self._lo = list(key)
            self._hi = list(key)
        else:
            for k in (0, 1):
                if key[k] < self._lo[k]:
                    self._lo[k] = key[k]
                if key[k] > self._hi[k]:
                    self._hi[k] = key[k]

    def _ring(self, ci: int, cj: int, k: int) -> Iterator[List[int]]:
        cells = self._cells
        if k == 0:
            b = cells.get((ci, cj))
            if b:
                yield b
            return
        for i in range(ci - k, ci + k + 1):
            b = cells.get((i, cj - k))
            if b:
                yield b
            b = cells.get((i, cj + k))
            if b:
                yield b
        for j in range(cj - k + 1, cj + k):
            b = cells.get((ci - k, j))
            if b:
                yield b
            b = cells.get((ci + k, j))
            if b:
                yield b

    def nearest(self, q: Config, keep: Predicate = None) -> Optional[int]:
        if not self._pos:
            return None
        qx, qy = q[0], q[1]
        ci, cj = self._cell(qx, qy)
        max_k = max(abs(ci - self._lo[0]), abs(ci - self._hi[0]),
                    abs(cj - self._lo[1]), abs(cj - self._hi[1]))
        pos = self._pos
        best = None
        best_d2 = math.inf
        cs = self.cell_size
        k = 0
        while k <= max_k:
            for bucket in self._ring(ci, cj, k):
                for nid in bucket:
                    p = pos[nid]
                    dx = p[0] - qx
                    dy = p[1] - qy
                    d2 = dx * dx + dy * dy
                    if d2 < best_d2 or (d2 == best_d2 and nid < best):
                        if keep is None or keep(nid):
                            best = nid
                            best_d2 = d2
            # anything in ring k+1 or beyond is at least k*cs away
            if best is not None and math.sqrt(best_d2) < k * cs:
                break
            k += 1
        return best

    def within_radius(self, q: Config, r: float, keep: Predicate = None) -> List[int]:
        """Ids within closed distance ``r`` of ``q``, sorted by (distance, id)."""
        if r < 0:
            raise ValueError(f"radius must be non-negative, got {r}")
        if not self._pos:
            return []
        qx, qy = q[0], q[1]
        pos = self._pos
        r2 = r * r
        if math.isinf(r):
            cand = list(pos)
        else:
            i0, j0 = self._cell(qx - r, qy - r)
            i1, j1 = self._cell(qx + r, qy + r)
            i0 = max(i0, self._lo[0])
            j0 = max(j0, self._lo[1])
            i1 = min(i1, self._hi[0])
            j1 = min(j1, self._hi[1])
            cand = []
            cells = self._cells
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    b = cells.get((i, j))
                    if b:
                        cand.extend(b)
        hits = []
        for nid in cand:
            p = pos[nid]
            dx = p[0] - qx
            dy = p[1] - qy
            d2 = dx * dx + dy * dy
            if d2 <= r2 and (keep is None or keep(nid)):
                hits.append((d2, nid))
        hits.sort()
        return [nid for _, nid in hits]
