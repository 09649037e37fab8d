"""Brute-force reference solver for desk-scale verification.

Enumerates every subset and every ordering of a small customer set, splits
each order into trips exactly as the heuristic does, and applies the daily
trip cap.  Factorial in the input size, so capped hard at 8 customers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .geo import Point, TrafficModel
from .popgen import Customer
from .router import (
    DEPOT,
    MultiTripPath,
    RoutingParams,
    path_time,
    select_top_trips,
    serviceable_set,
    split_into_trips,
)

__all__ = ["OracleResult", "exact_best_service", "exact_best_depot", "SIZE_CAP"]

SIZE_CAP = 8  # 8! orderings x subsets is tractable; beyond that, refuse


@dataclass(frozen=True)
class OracleResult:
    best_customers_served: int
    best_total_path_time: float
    witness: MultiTripPath


def _selected_path(depot: Point, evaluation, order: tuple[Customer, ...]) -> MultiTripPath:
    # rebuild the path of the SELECTED trips only, preserving stop order
    by_id = {c.id: c for c in order}
    waypoints: list = [DEPOT]
    for trip in evaluation.trips:
        waypoints.extend(by_id[cid] for cid in trip.customer_ids)
        waypoints.append(DEPOT)
    return MultiTripPath(tuple(waypoints))


def exact_best_service(
    depot: Point,
    customers: list[Customer],
    model: TrafficModel,
    params: RoutingParams,
) -> OracleResult:
    """Exact optimum over all subsets and orderings, greedy-split, D-capped.

    Maximizes customers served; ties broken by the smaller total path time of
    the selected trips (the witness path), then by enumeration order.  The
    witness contains only the selected trips.
    """
    if len(customers) > SIZE_CAP:
        raise ValueError(f"oracle capped at {SIZE_CAP} customers, got {len(customers)}")
    pool = serviceable_set(depot, customers, model, params)

    best_served = 0
    best_time = 0.0
    best_witness = MultiTripPath((DEPOT, DEPOT))
    for size in range(len(pool), 0, -1):
        if size < best_served:
            break  # smaller subsets cannot reach, let alone tie, best_served
        for subset in combinations(pool, size):
            for order in permutations(subset):
                path = split_into_trips(depot, order, model, params)
                evaluation = select_top_trips(path, depot, model, params)
                witness = _selected_path(depot, evaluation, order)
                served = evaluation.customers_served
                time = path_time(witness, depot, model)
                if served > best_served or (served == best_served and time < best_time):
                    best_served = served
                    best_time = time
                    best_witness = witness
    return OracleResult(
        best_customers_served=best_served,
        best_total_path_time=best_time,
        witness=best_witness,
    )


def exact_best_depot(
    candidates: list[Point],
    customers: list[Customer],
    model: TrafficModel,
    params: RoutingParams,
) -> tuple[Point, OracleResult]:
    """exact_best_service at each candidate; argmax served, first-wins ties."""
    if not candidates:
        raise ValueError("exact_best_depot needs at least one candidate")
    if len(customers) > SIZE_CAP:
        raise ValueError(f"oracle capped at {SIZE_CAP} customers, got {len(customers)}")
    best: tuple[Point, OracleResult] | None = None
    for candidate in candidates:
        result = exact_best_service(candidate, customers, model, params)
        if best is None or result.best_customers_served > best[1].best_customers_served:
            best = (candidate, result)
    return best
