"""Density-based point ordering and cluster extraction.

The ordering algorithm walks the point set expanding from core points,
always taking the unprocessed point with the smallest current reachability
distance. The resulting linear order, annotated with reachability and core
distances, encodes the density structure; clusters are read off it with a
single horizontal reachability threshold.

Determinism rules (needed for reproducible runs and reference comparison):
the next start point is the lowest unprocessed id, and equal reachabilities
in the seed queue break toward the lower id.
"""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass, field
from typing import IO, Mapping

from .geometry import Point2D, euclidean_distance
from .spatial import GridIndex, brute_force_query

# below this size the grid index buys nothing over a linear scan
_GRID_THRESHOLD = 64


@dataclass(frozen=True)
class OpticsParams:
    """Neighborhood radius and the core-point population threshold.

    ``min_pts`` counts the point itself as part of its own neighborhood,
    so ``min_pts=1`` makes every point a core point with core distance 0.
    """

    eps: float
    min_pts: int

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.min_pts < 1:
            raise ValueError(f"min_pts must be >= 1, got {self.min_pts}")


@dataclass(frozen=True)
class OrderedPoint:
    """One slot of the output ordering.

    ``reachability`` is None for the first point of each density-connected
    group; ``core_distance`` is None for non-core points.
    """

    point_id: int
    order_index: int
    reachability: float | None
    core_distance: float | None


@dataclass(frozen=True)
class Cluster:
    cluster_id: int
    members: tuple[int, ...]


@dataclass
class ClusterAssignment:
    clusters: list[Cluster]
    outliers: set[int] = field(default_factory=set)


class _Neighborhoods:
    """eps-neighborhood lookup, grid-backed for larger point sets."""

    def __init__(self, points: Mapping[int, Point2D], eps: float):
        self.points = points
        self.eps = eps
        self._grid = GridIndex(points, eps) if len(points) >= _GRID_THRESHOLD else None

    def query(self, pid: int) -> list[tuple[int, float]]:
        center = self.points[pid]
        if self._grid is not None:
            return self._grid.query(center, self.eps)
        return brute_force_query(self.points, center, self.eps)


def core_distance(
    pid: int, points: Mapping[int, Point2D], params: OpticsParams
) -> float | None:
    """Distance to the min_pts-th closest point within eps, or None.

    None means the eps-neighborhood of ``pid`` (itself included) holds
    fewer than ``min_pts`` points, i.e. ``pid`` is not a core point.
    """
    neighborhood = _Neighborhoods(points, params.eps).query(pid)
    return _core_distance_from(neighborhood, params.min_pts)


def _core_distance_from(
    neighborhood: list[tuple[int, float]], min_pts: int
) -> float | None:
    if len(neighborhood) < min_pts:
        return None
    dists = sorted(d for _, d in neighborhood)
    return dists[min_pts - 1]


def reachability_distance(
    p: int, q: int, points: Mapping[int, Point2D], params: OpticsParams
) -> float | None:
    """max(core_distance(p), dist(p, q)), or None when p is not core."""
    cd = core_distance(p, points, params)
    if cd is None:
        return None
    return max(cd, euclidean_distance(points[p], points[q]))


def optics_order(
    points: Mapping[int, Point2D], params: OpticsParams
) -> list[OrderedPoint]:
    """Emit every point once, ordered by expansion from core points.

    Each emitted point carries the smallest reachability distance seen from
    any core point processed before it; group starters carry None.
    """
    if not points:
        raise ValueError("point set must be non-empty")
    hoods = _Neighborhoods(points, params.eps)
    core: dict[int, float | None] = {}
    reach: dict[int, float] = {}
    processed: set[int] = set()
    order: list[OrderedPoint] = []
    # seed queue with lazy deletion: stale heap entries are skipped when
    # their priority no longer matches the current reachability
    heap: list[tuple[float, int]] = []

    def emit(pid: int, reachability: float | None) -> None:
        processed.add(pid)
        neighborhood = hoods.query(pid)
        cd = _core_distance_from(neighborhood, params.min_pts)
        core[pid] = cd
        order.append(OrderedPoint(pid, len(order), reachability, cd))
        if cd is None:
            return
        for q, d in neighborhood:
            if q == pid or q in processed:
                continue
            new_reach = max(cd, d)
            if q not in reach or new_reach < reach[q]:
                reach[q] = new_reach
                heapq.heappush(heap, (new_reach, q))

    for start in sorted(points):
        if start in processed:
            continue
        emit(start, None)
        while heap:
            r, q = heapq.heappop(heap)
            if q in processed or r != reach[q]:
                continue
            emit(q, r)
    return order


def extract_clusters(
    ordering: list[OrderedPoint], eps_prime: float
) -> ClusterAssignment:
    """Cut the ordering at a horizontal reachability threshold.

    Consecutive points with reachability <= eps_prime form a cluster; a
    point above the cut (or with undefined reachability) starts a fresh
    cluster when its own core distance is within the cut, and is an
    outlier otherwise.
    """
    if eps_prime <= 0:
        raise ValueError(f"eps_prime must be positive, got {eps_prime}")
    clusters: list[Cluster] = []
    outliers: set[int] = set()
    current: list[int] = []

    def close_current() -> None:
        if current:
            clusters.append(Cluster(len(clusters), tuple(current)))
            current.clear()

    for op in ordering:
        if op.reachability is not None and op.reachability <= eps_prime:
            current.append(op.point_id)
        else:
            close_current()
            if op.core_distance is not None and op.core_distance <= eps_prime:
                current.append(op.point_id)
            else:
                outliers.add(op.point_id)
    close_current()
    return ClusterAssignment(clusters, outliers)


def write_reachability_csv(ordering: list[OrderedPoint], out: IO[str]) -> None:
    """Plot-ready dump of the ordering; None encodes as an empty field."""
    writer = csv.writer(out)
    writer.writerow(["order_index", "point_id", "reachability", "core_distance"])
    for op in ordering:
        writer.writerow(
            [
                op.order_index,
                op.point_id,
                "" if op.reachability is None else repr(op.reachability),
                "" if op.core_distance is None else repr(op.core_distance),
            ]
        )


def read_reachability_csv(src: IO[str]) -> list[OrderedPoint]:
    reader = csv.reader(src)
    header = next(reader, None)
    if header != ["order_index", "point_id", "reachability", "core_distance"]:
        raise ValueError("not a reachability CSV")
    out = []
    for row in reader:
        idx, pid, r, cd = row
        out.append(
            OrderedPoint(
                point_id=int(pid),
                order_index=int(idx),
                reachability=float(r) if r else None,
                core_distance=float(cd) if cd else None,
            )
        )
    return out
