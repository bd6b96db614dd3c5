"""Uniform-grid spatial index for fixed-radius neighborhood queries.

Points are bucketed into square cells sized to the query radius, so a
radius query only inspects the 3x3 block of cells around the query point.
Results are identical to a brute-force scan; the grid is purely a speedup
for deployments with hundreds of sensors.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Mapping

from .geometry import Point2D, euclidean_distance


def brute_force_query(
    points: Mapping[int, Point2D], center: Point2D, radius: float
) -> list[tuple[int, float]]:
    """All (id, distance) pairs with distance <= radius, sorted by id."""
    out = []
    for pid in sorted(points):
        d = euclidean_distance(points[pid], center)
        if d <= radius:
            out.append((pid, d))
    return out


class GridIndex:
    """Bucket points into cells of ``cell_size`` for radius queries."""

    def __init__(self, points: Mapping[int, Point2D], cell_size: float):
        if cell_size <= 0:
            raise ValueError(f"cell_size must be positive, got {cell_size}")
        self.cell_size = cell_size
        self.points = dict(points)
        self._cells: dict[tuple[int, int], list[int]] = defaultdict(list)
        for pid, p in self.points.items():
            self._cells[self._cell_of(p)].append(pid)

    def _cell_of(self, p: Point2D) -> tuple[int, int]:
        return (math.floor(p.x / self.cell_size), math.floor(p.y / self.cell_size))

    def _candidate_ids(self, center: Point2D, radius: float) -> Iterable[int]:
        reach = math.ceil(radius / self.cell_size)
        cx, cy = self._cell_of(center)
        for ix in range(cx - reach, cx + reach + 1):
            for iy in range(cy - reach, cy + reach + 1):
                yield from self._cells.get((ix, iy), ())

    def query(self, center: Point2D, radius: float) -> list[tuple[int, float]]:
        """All (id, distance) pairs with distance <= radius, sorted by id."""
        out = []
        for pid in self._candidate_ids(center, radius):
            d = euclidean_distance(self.points[pid], center)
            if d <= radius:
                out.append((pid, d))
        out.sort()
        return out
