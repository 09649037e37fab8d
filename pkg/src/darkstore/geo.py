"""Geometry and travel-time model.

Travel time between two map points is a line integral of a piecewise-constant
speed factor along the straight segment joining them.  The factor ("traffic
multiplier", minutes per map-unit) is constant inside each of Z concentric
zones around a fixed center; uniform traffic is the degenerate single-zone
case, where travel time reduces to multiplier times Euclidean distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import pairwise

import numpy as np

__all__ = [
    "Point",
    "TrafficModel",
    "zone_multiplier",
    "travel_time",
    "travel_time_matrix",
]


@dataclass(frozen=True)
class Point:
    """A 2-D map coordinate in abstract map-units."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class TrafficModel:
    """Concentric traffic zones with per-zone time multipliers.

    ``zone_radii`` holds the Z-1 boundary radii of Z zones, strictly
    ascending; ``multipliers`` holds Z values in minutes per map-unit,
    innermost zone first.  A single multiplier with no radii models uniform
    traffic.
    """

    center: Point
    zone_radii: tuple[float, ...]
    multipliers: tuple[float, ...]

    def __post_init__(self) -> None:
        radii = tuple(float(r) for r in self.zone_radii)
        mults = tuple(float(m) for m in self.multipliers)
        object.__setattr__(self, "zone_radii", radii)
        object.__setattr__(self, "multipliers", mults)
        if len(mults) != len(radii) + 1:
            raise ValueError(
                f"need exactly one multiplier per zone: "
                f"{len(radii)} radii require {len(radii) + 1} multipliers, got {len(mults)}"
            )
        if any(m <= 0 for m in mults):
            raise ValueError(f"multipliers must be positive, got {mults}")
        if any(r <= 0 for r in radii):
            raise ValueError(f"zone radii must be positive, got {radii}")
        if any(b <= a for a, b in pairwise(radii)):
            raise ValueError(f"zone radii must be strictly ascending, got {radii}")

    @classmethod
    def uniform(cls, multiplier: float = 1.0) -> TrafficModel:
        """Single-zone model: travel time = multiplier x Euclidean distance."""
        return cls(center=Point(0.0, 0.0), zone_radii=(), multipliers=(multiplier,))


def zone_multiplier(model: TrafficModel, p: Point) -> float:
    """Multiplier of the innermost zone containing ``p``.

    A point exactly on a zone boundary belongs to the inner zone.
    """
    d = math.hypot(p.x - model.center.x, p.y - model.center.y)
    for k, r in enumerate(model.zone_radii):
        if d <= r:
            return model.multipliers[k]
    return model.multipliers[-1]


def travel_time(model: TrafficModel, a: Point, b: Point) -> float:
    """Minutes to travel the straight segment from ``a`` to ``b``.

    The segment is cut at its intersections with the zone boundary circles,
    found analytically: with f = a - center and v = b - a, the crossing
    parameters solve |f + t v|^2 = r^2, a quadratic in t per radius.  Between
    consecutive cuts the multiplier is constant up to measure zero, so the
    integral is the sum of sub-segment lengths weighted by the zone probed
    inside each sub-segment.  Exact cut points make the result independent of
    any sampling resolution; endpoints are swapped into a canonical order
    first, so the function is exactly symmetric in (a, b).
    """
    if a == b:
        return 0.0
    if (b.x, b.y) < (a.x, a.y):
        a, b = b, a
    dx = b.x - a.x
    dy = b.y - a.y
    length = math.hypot(dx, dy)
    mults = model.multipliers
    if len(mults) == 1:
        return mults[0] * length

    fx = a.x - model.center.x
    fy = a.y - model.center.y
    qa = dx * dx + dy * dy
    qb = 2.0 * (fx * dx + fy * dy)
    qc0 = fx * fx + fy * fy
    cuts = [0.0, 1.0]
    for r in model.zone_radii:
        disc = qb * qb - 4.0 * qa * (qc0 - r * r)
        if disc <= 0.0:
            continue  # no crossing, or tangent (zone unchanged either side)
        sq = math.sqrt(disc)
        for t in ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)):
            if 0.0 < t < 1.0:
                cuts.append(t)
    cuts.sort()

    radii = model.zone_radii

    def zone_at(t: float) -> int:
        d = math.hypot(fx + t * dx, fy + t * dy)
        for k, r in enumerate(radii):
            if d <= r:
                return k
        return len(radii)

    total = 0.0
    for t0, t1 in pairwise(cuts):
        if t1 <= t0:
            continue
        span = t1 - t0
        # two interior probes, keeping the outer zone of the two: a boundary
        # circle the piece never crosses can still graze it at one point (the
        # closest approach), and a lone probe landing exactly there would bill
        # the whole piece at the inner rate for a measure-zero contact
        zone = max(zone_at(t0 + span / 3.0), zone_at(t1 - span / 3.0))
        total += span * length * mults[zone]
    return total


def travel_time_matrix(model: TrafficModel, points: list[Point]) -> np.ndarray:
    """Symmetric matrix of pairwise travel times between ``points``.

    Entries are exactly the scalar ``travel_time`` values, so downstream code
    may mix matrix lookups with direct calls without float drift.
    """
    n = len(points)
    mat = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            t = travel_time(model, points[i], points[j])
            mat[i, j] = t
            mat[j, i] = t
    return mat
