"""Planar geometry for sensor discs: distances, containment, boundary overlap.

All lengths are in meters and all angles in radians. Sensor coverage areas
are modeled as closed discs of equal radius; the overlap between two discs
is quantified by the half-angle of the boundary arc of one disc that lies
inside the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class CoLocatedSensorsError(ValueError):
    """Two sensors occupy the same position (center distance is zero).

    Overlap geometry is degenerate for coincident discs, so callers must
    deduplicate co-located sensors explicitly instead of receiving a number.
    """


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Disc:
    center: Point2D
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class OverlapResult:
    """Boundary split of one disc against an equal-radius neighbor.

    ``overlapped_perimeter + non_overlapped_perimeter`` always equals the
    full circumference 2*pi*r.
    """

    alpha: float
    overlapped_perimeter: float
    non_overlapped_perimeter: float


def euclidean_distance(a: Point2D, b: Point2D) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def overlap_angle(d: float, r: float) -> float:
    """Half-angle of the arc of a disc boundary inside an equal-radius disc.

    ``d`` is the center distance, ``r`` the common radius. Discs at
    ``d >= 2r`` do not overlap (angle 0); the angle grows to pi/2 as the
    centers approach. Coincident centers are rejected.

    Raises:
        CoLocatedSensorsError: if ``d == 0``.
        ValueError: if ``d < 0`` or ``r <= 0``.
    """
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    if d == 0:
        raise CoLocatedSensorsError("coincident disc centers (d = 0)")
    if d >= 2 * r:
        return 0.0
    # acos argument is in (0, 1) here; clamp guards rounding at the edges
    return min(math.pi / 2, max(0.0, math.acos(d / (2 * r))))


def non_overlapped_perimeter(d: float, r: float) -> float:
    """Length 2r(pi - alpha) of a disc boundary outside an equal neighbor."""
    return 2 * r * (math.pi - overlap_angle(d, r))


def overlap(d: float, r: float) -> OverlapResult:
    """Full boundary split (angle plus both arc lengths) for one disc pair."""
    alpha = overlap_angle(d, r)
    return OverlapResult(
        alpha=alpha,
        overlapped_perimeter=2 * r * alpha,
        non_overlapped_perimeter=2 * r * (math.pi - alpha),
    )


def disc_contains(disc: Disc, p: Point2D) -> bool:
    """True iff ``p`` lies in the closed disc (boundary inclusive)."""
    return euclidean_distance(disc.center, p) <= disc.radius
