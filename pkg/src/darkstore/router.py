"""Single-depot routing core: serviceability filter, trip splitting, 2-opt.

Given one candidate depot, find the customers reachable within the per-trip
time cap, order them into a multi-trip path (consecutive trips separated by
depot returns), improve the order by 2-opt segment reversal, and keep the top
D trips, where D = couriers x trips-per-courier is the daily trip budget.

Two different time measures coexist on purpose:

* trip feasibility counts depot -> first -> ... -> last, EXCLUDING the return
  leg (couriers must reach the last customer within t_max; the ride home is
  off the clock);
* the 2-opt objective is the total path time INCLUDING every depot return,
  since that is the full distance the couriers ride.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Final, Union

import numpy as np
from numba import njit

from .geo import Point, TrafficModel, travel_time, travel_time_matrix
from .popgen import Customer

__all__ = [
    "DEPOT",
    "RoutingParams",
    "TripPlan",
    "MultiTripPath",
    "DepotEvaluation",
    "serviceable_set",
    "split_into_trips",
    "path_time",
    "two_opt_improve",
    "select_top_trips",
    "evaluate_depot",
]

DEPOT: Final[str] = "depot"

Waypoint = Union[Customer, str]

# strict-improvement threshold for 2-opt moves, to avoid cycling on float ties
IMPROVEMENT_TOL: Final[float] = 1e-9


@dataclass(frozen=True)
class RoutingParams:
    """t_max is both the service radius and the per-trip time cap (minutes)."""

    t_max: float
    couriers_m: int
    trips_per_courier_n: int

    def __post_init__(self) -> None:
        if self.t_max <= 0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.couriers_m < 1:
            raise ValueError(f"couriers_m must be >= 1, got {self.couriers_m}")
        if self.trips_per_courier_n < 1:
            raise ValueError(f"trips_per_courier_n must be >= 1, got {self.trips_per_courier_n}")

    @property
    def daily_trip_cap(self) -> int:
        """D = m x n, the maximum trips a warehouse may run per day."""
        return self.couriers_m * self.trips_per_courier_n


@dataclass(frozen=True)
class TripPlan:
    """One courier excursion: ordered customers, depot-to-last-customer time."""

    customer_ids: tuple[int, ...]
    trip_time: float
    deliveries: int

    def __post_init__(self) -> None:
        if not self.customer_ids:
            raise ValueError("a trip must serve at least one customer")
        if len(set(self.customer_ids)) != len(self.customer_ids):
            raise ValueError(f"duplicate customers in trip: {self.customer_ids}")
        if self.deliveries != len(self.customer_ids):
            raise ValueError("deliveries must equal the number of customers")


@dataclass(frozen=True)
class MultiTripPath:
    """Waypoint sequence starting and ending at the depot.

    Each waypoint is either the DEPOT marker or a Customer; an interior DEPOT
    closes one trip and opens the next.
    """

    waypoints: tuple[Waypoint, ...]

    def __post_init__(self) -> None:
        if len(self.waypoints) < 2 or self.waypoints[0] != DEPOT or self.waypoints[-1] != DEPOT:
            raise ValueError("path must begin and end at the depot")

    def trips(self) -> list[tuple[Customer, ...]]:
        """Customer runs between consecutive depot visits, in path order."""
        out: list[tuple[Customer, ...]] = []
        run: list[Customer] = []
        for wp in self.waypoints:
            if wp == DEPOT:
                if run:
                    out.append(tuple(run))
                    run = []
            else:
                run.append(wp)
        return out

    def customer_ids(self) -> list[int]:
        return [wp.id for wp in self.waypoints if wp != DEPOT]


@dataclass(frozen=True)
class DepotEvaluation:
    """Result of evaluating one candidate depot: the selected top-D trips.

    total_path_time is the 2-opt objective: the full multi-trip path time
    including depot returns, measured before trip selection.
    """

    depot: Point
    trips: tuple[TripPlan, ...]
    customers_served: int
    total_path_time: float

    def served_ids(self) -> set[int]:
        return {cid for trip in self.trips for cid in trip.customer_ids}


def serviceable_set(
    depot: Point,
    customers: list[Customer],
    model: TrafficModel,
    params: RoutingParams,
) -> list[Customer]:
    """Customers reachable from the depot within t_max, input order kept."""
    return [c for c in customers if travel_time(model, depot, c.location) <= params.t_max]


def split_into_trips(
    depot: Point,
    customer_order: list[Customer] | tuple[Customer, ...],
    model: TrafficModel,
    params: RoutingParams,
) -> MultiTripPath:
    """Divide an ordered customer sequence into trips under the t_max cap.

    Walks the order accumulating leg times; when serving the next customer
    would push the running trip past t_max, a depot return is inserted and
    that same customer is served from the depot instead.  Every customer in
    the order appears exactly once.  The cap check excludes return legs, so
    any individually serviceable customer always fits a fresh trip.
    """
    waypoints: list[Waypoint] = [DEPOT]
    load = 0.0
    current = depot
    for c in customer_order:
        leg = travel_time(model, current, c.location)
        if waypoints[-1] != DEPOT and load + leg > params.t_max:
            waypoints.append(DEPOT)
            leg = travel_time(model, depot, c.location)
            load = 0.0
        load += leg
        waypoints.append(c)
        current = c.location
    waypoints.append(DEPOT)
    return MultiTripPath(tuple(waypoints))


def path_time(path: MultiTripPath, depot: Point, model: TrafficModel) -> float:
    """Total travel time over all consecutive waypoint pairs, returns included."""
    total = 0.0
    prev = depot
    for wp in path.waypoints[1:]:
        loc = depot if wp == DEPOT else wp.location
        total += travel_time(model, prev, loc)
        prev = loc
    return total


@njit(cache=True)
def _route_cost(order: np.ndarray, dmat: np.ndarray, t_max: float) -> float:
    """path_time of split_into_trips(order) on a travel-time matrix.

    ``order`` holds matrix indices >= 1; row/column 0 is the depot.  The
    accumulation mirrors the public split walk leg for leg, in the same
    float order, so results agree bitwise with the pure-Python pair.
    """
    total = 0.0
    load = 0.0
    prev = 0
    for k in range(order.shape[0]):
        c = order[k]
        leg = dmat[prev, c]
        if prev != 0 and load + leg > t_max:
            total += dmat[prev, 0]
            leg = dmat[0, c]
            load = 0.0
        load += leg
        total += leg
        prev = c
    if prev != 0:
        total += dmat[prev, 0]
    return total


@njit(cache=True)
def _two_opt_core(
    order: np.ndarray, dmat: np.ndarray, t_max: float, tol: float
) -> np.ndarray:
    """First-improvement 2-opt over segment reversals of ``order``.

    Every candidate re-splits from scratch via _route_cost; a move is kept
    only when the full path time drops by more than ``tol``.  Terminates when
    a complete (i, j) pass accepts nothing.
    """
    n = order.shape[0]
    best = _route_cost(order, dmat, t_max)
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                cand = order.copy()
                lo, hi = i, j
                while lo < hi:
                    tmp = cand[lo]
                    cand[lo] = cand[hi]
                    cand[hi] = tmp
                    lo += 1
                    hi -= 1
                t = _route_cost(cand, dmat, t_max)
                if t < best - tol:
                    order = cand
                    best = t
                    improved = True
                    break
            if improved:
                break
    return order


def two_opt_improve(
    depot: Point,
    serviceable: list[Customer],
    model: TrafficModel,
    params: RoutingParams,
) -> tuple[tuple[Customer, ...], MultiTripPath]:
    """Improve the customer order by 2-opt; returns (final order, its split).

    The initial path is the input order.  Travel times are materialized into
    a matrix once; the scan itself runs compiled.
    """
    order = tuple(serviceable)
    if len(order) > 1:
        points = [depot] + [c.location for c in order]
        dmat = travel_time_matrix(model, points)
        idx = np.arange(1, len(order) + 1, dtype=np.int64)
        final = _two_opt_core(idx, dmat, params.t_max, IMPROVEMENT_TOL)
        order = tuple(order[i - 1] for i in final)
    return order, split_into_trips(depot, order, model, params)


def select_top_trips(
    path: MultiTripPath,
    depot: Point,
    model: TrafficModel,
    params: RoutingParams,
) -> DepotEvaluation:
    """Keep the D highest-delivery trips of the path.

    Ranking: deliveries descending, then smaller trip_time, then earlier
    position in the path.
    """
    plans: list[tuple[TripPlan, int]] = []
    for pos, group in enumerate(path.trips()):
        time = 0.0
        prev = depot
        for c in group:
            time += travel_time(model, prev, c.location)
            prev = c.location
        plans.append((TripPlan(tuple(c.id for c in group), time, len(group)), pos))
    plans.sort(key=lambda item: (-item[0].deliveries, item[0].trip_time, item[1]))
    selected = tuple(plan for plan, _ in plans[: params.daily_trip_cap])
    return DepotEvaluation(
        depot=depot,
        trips=selected,
        customers_served=sum(t.deliveries for t in selected),
        total_path_time=path_time(path, depot, model),
    )


def evaluate_depot(
    depot: Point,
    customers: list[Customer],
    model: TrafficModel,
    params: RoutingParams,
) -> DepotEvaluation:
    """Full inner loop for one candidate depot location."""
    serviceable = serviceable_set(depot, customers, model, params)
    if not serviceable:
        return DepotEvaluation(depot=depot, trips=(), customers_served=0, total_path_time=0.0)
    _, path = two_opt_improve(depot, serviceable, model, params)
    return select_top_trips(path, depot, model, params)
