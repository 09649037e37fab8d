"""Routing core tests: the split accumulator, 2-opt, trip selection, invariants."""

from __future__ import annotations

import numpy as np
import pytest

from darkstore import (
    DEPOT,
    Customer,
    MultiTripPath,
    Point,
    RoutingParams,
    TrafficModel,
    TripPlan,
    evaluate_depot,
    path_time,
    select_top_trips,
    serviceable_set,
    split_into_trips,
    travel_time,
    travel_time_matrix,
    two_opt_improve,
)
from darkstore.router import _route_cost
from oracles import best_tour_time, random_customers, random_model, split_reference

UNIT = TrafficModel.uniform(1.0)
ORIGIN = Point(0.0, 0.0)


def params(t_max: float, m: int = 1, n: int = 100) -> RoutingParams:
    return RoutingParams(t_max=t_max, couriers_m=m, trips_per_courier_n=n)


def at(*coords: tuple[float, float]) -> list[Customer]:
    return [Customer(i, Point(x, y)) for i, (x, y) in enumerate(coords)]


def test_routing_params_validation_and_cap():
    assert params(30.0, 3, 5).daily_trip_cap == 15
    with pytest.raises(ValueError):
        RoutingParams(t_max=0.0, couriers_m=1, trips_per_courier_n=1)
    with pytest.raises(ValueError):
        RoutingParams(t_max=1.0, couriers_m=0, trips_per_courier_n=1)
    with pytest.raises(ValueError):
        RoutingParams(t_max=1.0, couriers_m=1, trips_per_courier_n=0)


def test_serviceable_set_threshold_and_order():
    customers = at((0.0, 9.9), (0.0, 10.1), (10.0, 0.0), (3.0, 4.0))
    got = serviceable_set(ORIGIN, customers, UNIT, params(10.0))
    assert [c.id for c in got] == [0, 2, 3]  # 10.1 excluded, exact 10.0 included
    assert serviceable_set(ORIGIN, [], UNIT, params(10.0)) == []


def test_split_single_customer():
    c = at((0.0, 7.0))
    path = split_into_trips(ORIGIN, c, UNIT, params(10.0))
    assert path.waypoints == (DEPOT, c[0], DEPOT)
    trips = path.trips()
    assert len(trips) == 1
    ev = select_top_trips(path, ORIGIN, UNIT, params(10.0))
    assert ev.trips[0].trip_time == pytest.approx(7.0)


def test_split_two_customers_exactly_fits():
    c = at((0.0, 1.0), (0.0, 2.0))
    path = split_into_trips(ORIGIN, c, UNIT, params(2.0))
    assert path.waypoints == (DEPOT, c[0], c[1], DEPOT)
    ev = select_top_trips(path, ORIGIN, UNIT, params(2.0))
    assert ev.trips[0].trip_time == pytest.approx(2.0)


def test_split_second_leg_would_exceed_cap():
    c = at((0.0, 1.0), (0.0, 2.0))
    path = split_into_trips(ORIGIN, c, UNIT, params(1.5))
    assert path.waypoints == (DEPOT, c[0], DEPOT, c[1], DEPOT)
    assert [list(t) for t in path.trips()] == [[c[0]], [c[1]]]


def test_split_matches_independent_accumulator():
    rng = np.random.default_rng(101)
    checked = 0
    for _ in range(60):
        model = random_model(rng)
        depot = Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))
        pool = random_customers(rng, 7)
        t_max = float(rng.uniform(20.0, 120.0))
        rp = params(t_max)
        order = serviceable_set(depot, pool, model, rp)
        if not order:
            continue
        checked += 1
        path = split_into_trips(depot, order, model, rp)
        ref_trips, ref_times, ref_total = split_reference(depot, order, model, t_max)
        assert [list(ids) for ids in _trip_ids(path)] == ref_trips
        assert path_time(path, depot, model) == pytest.approx(ref_total, abs=1e-12)
        ev = select_top_trips(path, depot, model, rp)
        got_times = sorted(t.trip_time for t in ev.trips)
        assert got_times == pytest.approx(sorted(ref_times), abs=1e-12)
    assert checked >= 40


def _trip_ids(path: MultiTripPath) -> list[tuple[int, ...]]:
    return [tuple(c.id for c in trip) for trip in path.trips()]


def test_split_preserves_customer_multiset():
    rng = np.random.default_rng(7)
    depot = Point(50.0, 50.0)
    model = random_model(rng)
    customers = random_customers(rng, 30)
    rp = params(200.0)
    order = serviceable_set(depot, customers, model, rp)
    path = split_into_trips(depot, order, model, rp)
    assert sorted(path.customer_ids()) == sorted(c.id for c in order)


def test_path_time_trivial_cases():
    assert path_time(MultiTripPath((DEPOT, DEPOT)), ORIGIN, UNIT) == 0.0
    c = Customer(0, Point(0.0, 1.0))
    assert path_time(MultiTripPath((DEPOT, c, DEPOT)), ORIGIN, UNIT) == pytest.approx(2.0)


def test_path_time_is_sum_of_pairwise_legs():
    rng = np.random.default_rng(13)
    model = random_model(rng)
    depot = Point(40.0, 60.0)
    customers = random_customers(rng, 9)
    path = split_into_trips(depot, customers, model, params(500.0))
    expected = 0.0
    prev = depot
    for wp in path.waypoints[1:]:
        loc = depot if wp == DEPOT else wp.location
        expected += travel_time(model, prev, loc)
        prev = loc
    assert path_time(path, depot, model) == expected


def test_multitrippath_must_start_and_end_at_depot():
    c = Customer(0, Point(1.0, 1.0))
    with pytest.raises(ValueError):
        MultiTripPath((c, DEPOT))
    with pytest.raises(ValueError):
        MultiTripPath((DEPOT, c))


def test_tripplan_validation():
    with pytest.raises(ValueError):
        TripPlan((), 0.0, 0)
    with pytest.raises(ValueError):
        TripPlan((1, 1), 2.0, 2)
    with pytest.raises(ValueError):
        TripPlan((1, 2), 2.0, 3)


def test_two_opt_zero_and_one_customer_unchanged():
    rp = params(100.0)
    order, path = two_opt_improve(ORIGIN, [], UNIT, rp)
    assert order == () and path.waypoints == (DEPOT, DEPOT)
    c = at((3.0, 4.0))
    order, path = two_opt_improve(ORIGIN, c, UNIT, rp)
    assert order == (c[0],)
    assert path.waypoints == (DEPOT, c[0], DEPOT)


def test_two_opt_square_matches_permutation_brute_force():
    # corners visited in diagonal-crossing order; one trip fits everything
    corners = at((0.0, 0.0), (10.0, 10.0), (10.0, 0.0), (0.0, 10.0))
    rp = params(1000.0)
    order, path = two_opt_improve(ORIGIN, corners, UNIT, rp)
    result = path_time(path, ORIGIN, UNIT)
    assert result == pytest.approx(best_tour_time(ORIGIN, corners, UNIT, rp.t_max), abs=1e-9)
    assert result == pytest.approx(40.0, abs=1e-9)  # the square's perimeter loop
    assert len(path.trips()) == 1


def test_two_opt_improves_and_reaches_local_optimum():
    rng = np.random.default_rng(19)
    for _ in range(25):
        model = random_model(rng)
        depot = Point(float(rng.uniform(20, 80)), float(rng.uniform(20, 80)))
        pool = random_customers(rng, int(rng.integers(2, 11)))
        rp = params(float(rng.uniform(30.0, 90.0)))
        serviceable = serviceable_set(depot, pool, model, rp)
        if len(serviceable) < 2:
            continue
        initial = path_time(split_into_trips(depot, serviceable, model, rp), depot, model)
        order, path = two_opt_improve(depot, serviceable, model, rp)
        final = path_time(path, depot, model)
        assert final <= initial + 1e-12
        assert sorted(c.id for c in order) == sorted(c.id for c in serviceable)
        # exhaustive move scan: no reversal may still win more than the tolerance
        for i in range(len(order) - 1):
            for j in range(i + 1, len(order)):
                cand = order[:i] + order[i : j + 1][::-1] + order[j + 1 :]
                t = path_time(split_into_trips(depot, cand, model, rp), depot, model)
                assert t >= final - 1e-9


def test_route_cost_matches_public_pair_bitwise():
    rng = np.random.default_rng(29)
    for _ in range(40):
        model = random_model(rng)
        depot = Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))
        customers = random_customers(rng, int(rng.integers(1, 12)))
        t_max = float(rng.uniform(15.0, 150.0))
        rp = params(t_max)
        points = [depot] + [c.location for c in customers]
        dmat = travel_time_matrix(model, points)
        idx = np.arange(1, len(customers) + 1, dtype=np.int64)
        rng.shuffle(idx)
        shuffled = [customers[i - 1] for i in idx]
        jit_cost = _route_cost(idx, dmat, t_max)
        public = path_time(split_into_trips(depot, shuffled, model, rp), depot, model)
        assert jit_cost == public


def test_select_top_trips_keeps_highest_deliveries():
    # trips of 5, 2 and 4 customers laid out on a line, far apart
    groups = [5, 2, 4]
    customers = []
    waypoints = [DEPOT]
    cid = 0
    for g, size in enumerate(groups):
        for k in range(size):
            customers.append(Customer(cid, Point(100.0 * g, float(k))))
            waypoints.append(customers[-1])
            cid += 1
        waypoints.append(DEPOT)
    path = MultiTripPath(tuple(waypoints))
    ev = select_top_trips(path, ORIGIN, UNIT, params(1000.0, 1, 2))
    assert [t.deliveries for t in ev.trips] == [5, 4]
    assert ev.customers_served == 9


def test_select_top_trips_keeps_all_when_cap_not_binding():
    customers = at((0.0, 5.0), (0.0, -5.0), (5.0, 0.0))
    waypoints = (DEPOT, customers[0], DEPOT, customers[1], DEPOT, customers[2], DEPOT)
    ev = select_top_trips(MultiTripPath(waypoints), ORIGIN, UNIT, params(10.0, 2, 2))
    assert len(ev.trips) == 3
    assert ev.customers_served == 3


def test_select_top_trips_tie_breaks_on_time_then_position():
    a = at((0.0, 4.0), (0.0, 8.0))  # trip time 8
    b = [Customer(10, Point(3.0, 0.0)), Customer(11, Point(6.0, 0.0))]  # trip time 6
    waypoints = (DEPOT, a[0], a[1], DEPOT, b[0], b[1], DEPOT)
    ev = select_top_trips(MultiTripPath(waypoints), ORIGIN, UNIT, params(10.0, 1, 1))
    assert ev.trips[0].customer_ids == (10, 11)  # both deliver 2; 6 min beats 8 min
    # exact time tie: earlier position in the path wins
    c = [Customer(20, Point(0.0, 6.0))]
    d = [Customer(21, Point(6.0, 0.0))]
    waypoints = (DEPOT, c[0], DEPOT, d[0], DEPOT)
    ev = select_top_trips(MultiTripPath(waypoints), ORIGIN, UNIT, params(10.0, 1, 1))
    assert ev.trips[0].customer_ids == (20,)


def test_evaluate_depot_empty_and_far():
    rp = params(5.0)
    ev = evaluate_depot(ORIGIN, [], UNIT, rp)
    assert ev.trips == () and ev.customers_served == 0 and ev.total_path_time == 0.0
    far = at((50.0, 50.0))
    ev = evaluate_depot(ORIGIN, far, UNIT, rp)
    assert ev.customers_served == 0


def test_evaluate_depot_single_serviceable():
    ev = evaluate_depot(ORIGIN, at((1.0, 1.0)), UNIT, params(5.0))
    assert ev.customers_served == 1
    assert len(ev.trips) == 1


def test_evaluate_depot_core_invariants():
    rng = np.random.default_rng(43)
    for _ in range(30):
        model = random_model(rng)
        depot = Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))
        customers = random_customers(rng, int(rng.integers(5, 40)))
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 5))
        rp = RoutingParams(
            t_max=float(rng.uniform(20.0, 80.0)), couriers_m=m, trips_per_courier_n=n
        )
        ev = evaluate_depot(depot, customers, model, rp)
        assert len(ev.trips) <= rp.daily_trip_cap
        assert ev.customers_served == sum(t.deliveries for t in ev.trips)
        served = [cid for t in ev.trips for cid in t.customer_ids]
        assert len(served) == len(set(served))
        for trip in ev.trips:
            assert trip.trip_time <= rp.t_max  # exact, same arithmetic as construction


def test_evaluate_depot_serves_everything_when_cap_is_loose():
    rng = np.random.default_rng(47)
    for _ in range(10):
        model = random_model(rng)
        depot = Point(float(rng.uniform(20, 80)), float(rng.uniform(20, 80)))
        customers = random_customers(rng, 20)
        rp = RoutingParams(t_max=60.0, couriers_m=20, trips_per_courier_n=1)
        reachable = serviceable_set(depot, customers, model, rp)
        ev = evaluate_depot(depot, customers, model, rp)
        assert ev.customers_served == len(reachable)


def test_evaluate_depot_deterministic():
    rng = np.random.default_rng(53)
    model = random_model(rng)
    depot = Point(30.0, 70.0)
    customers = random_customers(rng, 25)
    rp = params(40.0, 2, 3)
    assert evaluate_depot(depot, customers, model, rp) == evaluate_depot(
        depot, customers, model, rp
    )
