"""Outer loop: multi-resolution grid search and sequential warehouse placement.

A coarse grid is evaluated everywhere; the best few points seed progressively
smaller refinement grids.  Warehouses are placed one at a time, each search
seeing only the customers not already served by an earlier warehouse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geo import Point, TrafficModel
from .popgen import Customer, MapBounds
from .router import DepotEvaluation, RoutingParams, evaluate_depot

__all__ = [
    "SearchParams",
    "Placement",
    "SearchStats",
    "grid_points",
    "search_level",
    "find_best_location",
    "place_warehouses",
]


@dataclass(frozen=True)
class SearchParams:
    coarse_grid: int = 10
    refine_grid: int = 4
    keep_fraction: float = 0.05
    shrink_factor: float = 5.0
    levels: int = 3
    n_warehouses: int = 1

    def __post_init__(self) -> None:
        if self.coarse_grid < 1:
            raise ValueError(f"coarse_grid must be >= 1, got {self.coarse_grid}")
        if self.refine_grid < 1:
            raise ValueError(f"refine_grid must be >= 1, got {self.refine_grid}")
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ValueError(f"keep_fraction must be in (0, 1], got {self.keep_fraction}")
        if self.shrink_factor <= 0:
            raise ValueError(f"shrink_factor must be > 0, got {self.shrink_factor}")
        if self.levels < 0:
            raise ValueError(f"levels must be >= 0, got {self.levels}")
        if self.n_warehouses < 1:
            raise ValueError(f"n_warehouses must be >= 1, got {self.n_warehouses}")


@dataclass(frozen=True)
class Placement:
    """Ordered warehouses with their evaluations, plus never-served customers."""

    warehouses: tuple[tuple[Point, DepotEvaluation], ...]
    unserved: tuple[int, ...]


@dataclass
class SearchStats:
    """Instrumentation: how many depot evaluations each search performed."""

    depot_evaluations: int = 0
    per_warehouse: list[int] = field(default_factory=list)


def grid_points(bounds: MapBounds, per_axis: int) -> list[Point]:
    """per_axis x per_axis points evenly spaced over bounds, boundary included.

    Spacing is extent/(per_axis - 1); a single-point axis sits at the center.
    Points are enumerated row by row (y outer, x inner).
    """
    if per_axis < 1:
        raise ValueError(f"per_axis must be >= 1, got {per_axis}")
    if per_axis == 1:
        c = bounds.center
        return [Point(c.x, c.y)]
    w, h = bounds.extent
    sx = w / (per_axis - 1)
    sy = h / (per_axis - 1)
    return [
        Point(bounds.min.x + i * sx, bounds.min.y + j * sy)
        for j in range(per_axis)
        for i in range(per_axis)
    ]


def search_level(
    candidates: list[Point],
    customers: list[Customer],
    model: TrafficModel,
    routing_params: RoutingParams,
    stats: SearchStats | None = None,
) -> list[tuple[Point, DepotEvaluation]]:
    """Evaluate every candidate and rank the results.

    Ranking: customers_served descending, then smaller total_path_time, then
    candidate enumeration order.
    """
    if not candidates:
        raise ValueError("search_level needs at least one candidate")
    results = [(p, evaluate_depot(p, customers, model, routing_params)) for p in candidates]
    if stats is not None:
        stats.depot_evaluations += len(candidates)
    order = sorted(
        range(len(results)),
        key=lambda i: (-results[i][1].customers_served, results[i][1].total_path_time, i),
    )
    return [results[i] for i in order]


def _clipped_region(bounds: MapBounds, center: Point, width: float, height: float) -> MapBounds:
    # clipping trims the region at the map edge rather than shifting it
    return MapBounds(
        Point(max(bounds.min.x, center.x - width / 2), max(bounds.min.y, center.y - height / 2)),
        Point(min(bounds.max.x, center.x + width / 2), min(bounds.max.y, center.y + height / 2)),
    )


def find_best_location(
    customers: list[Customer],
    bounds: MapBounds,
    model: TrafficModel,
    routing_params: RoutingParams,
    search_params: SearchParams,
    stats: SearchStats | None = None,
) -> tuple[Point, DepotEvaluation]:
    """Multi-resolution search for the best single depot location.

    Coarse grid first; then, for each refinement level l = 1..levels, the top
    ceil(keep_fraction x coarse_count) points of everything evaluated so far
    seed refine_grid x refine_grid grids over regions of the original extent
    shrunk by shrink_factor^l, centered on those points and clipped to the
    map.  The globally best evaluation wins; if nothing serves any customer
    the best-ranked coarse point (enumeration order under total ties) is
    returned with its zero evaluation.
    """
    coarse = grid_points(bounds, search_params.coarse_grid)
    pool = search_level(coarse, customers, model, routing_params, stats)
    keep = math.ceil(search_params.keep_fraction * len(coarse))
    w, h = bounds.extent
    for level in range(1, search_params.levels + 1):
        retained = pool[: min(keep, len(pool))]
        rw = w / search_params.shrink_factor**level
        rh = h / search_params.shrink_factor**level
        fresh: list[tuple[Point, DepotEvaluation]] = []
        for point, _ in retained:
            region = _clipped_region(bounds, point, rw, rh)
            grid = grid_points(region, search_params.refine_grid)
            fresh.extend(search_level(grid, customers, model, routing_params, stats))
        merged = pool + fresh
        order = sorted(
            range(len(merged)),
            key=lambda i: (-merged[i][1].customers_served, merged[i][1].total_path_time, i),
        )
        pool = [merged[i] for i in order]
    return pool[0]


def place_warehouses(
    customers: list[Customer],
    bounds: MapBounds,
    model: TrafficModel,
    routing_params: RoutingParams,
    search_params: SearchParams,
    stats: SearchStats | None = None,
) -> Placement:
    """Place up to N warehouses sequentially, removing served customers.

    Only customers actually served are removed between rounds; a customer
    inside an earlier warehouse's radius that missed the trip cut stays
    available.  Stops early when no customers remain.
    """
    working = list(customers)
    warehouses: list[tuple[Point, DepotEvaluation]] = []
    for _ in range(search_params.n_warehouses):
        if not working:
            break
        before = stats.depot_evaluations if stats is not None else 0
        point, evaluation = find_best_location(
            working, bounds, model, routing_params, search_params, stats
        )
        if stats is not None:
            stats.per_warehouse.append(stats.depot_evaluations - before)
        warehouses.append((point, evaluation))
        served = evaluation.served_ids()
        working = [c for c in working if c.id not in served]
    return Placement(
        warehouses=tuple(warehouses),
        unserved=tuple(c.id for c in working),
    )
