"""Exhaustive-oracle tests: brute force agreement and heuristic dominance."""

from __future__ import annotations

import numpy as np
import pytest

from darkstore import (
    Customer,
    Point,
    RoutingParams,
    TrafficModel,
    evaluate_depot,
    exact_best_depot,
    exact_best_service,
    path_time,
    search_level,
    split_into_trips,
    travel_time,
)
from darkstore.router import DEPOT
from oracles import best_service, random_customers, random_model

UNIT = TrafficModel.uniform(1.0)
ORIGIN = Point(0.0, 0.0)


def test_single_customer():
    customers = [Customer(0, Point(0.0, 4.0))]
    params = RoutingParams(t_max=10.0, couriers_m=1, trips_per_courier_n=1)
    result = exact_best_service(ORIGIN, customers, UNIT, params)
    assert result.best_customers_served == 1
    assert result.best_total_path_time == pytest.approx(8.0)
    assert result.witness.customer_ids() == [0]


def test_size_cap_enforced():
    customers = [Customer(i, Point(float(i), 0.0)) for i in range(9)]
    params = RoutingParams(t_max=10.0, couriers_m=1, trips_per_courier_n=1)
    with pytest.raises(ValueError):
        exact_best_service(ORIGIN, customers, UNIT, params)


def test_ordering_matters_and_oracle_finds_it():
    # d = 1 trip only; visiting the far customer first forces a split
    a = Customer(0, Point(0.0, 5.0))
    b = Customer(1, Point(0.0, 10.0))
    params = RoutingParams(t_max=12.0, couriers_m=1, trips_per_courier_n=1)

    far_first = split_into_trips(ORIGIN, [b, a], UNIT, params)
    assert len(far_first.trips()) == 2  # 10 + 5 > 12 closes the first trip

    near_first = split_into_trips(ORIGIN, [a, b], UNIT, params)
    assert len(near_first.trips()) == 1
    assert len(near_first.trips()[0]) == 2

    result = exact_best_service(ORIGIN, [a, b], UNIT, params)
    assert result.best_customers_served == 2
    assert result.best_total_path_time == pytest.approx(20.0)


def test_witness_is_feasible_and_consistent():
    rng = np.random.default_rng(89)
    for _ in range(25):
        model = random_model(rng)
        customers = random_customers(rng, int(rng.integers(1, 7)))
        params = RoutingParams(
            t_max=float(rng.uniform(15.0, 45.0)),
            couriers_m=int(rng.integers(1, 3)),
            trips_per_courier_n=int(rng.integers(1, 3)),
        )
        depot = Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))
        result = exact_best_service(depot, customers, model, params)
        witness = result.witness
        trips = witness.trips()
        assert len(trips) <= params.daily_trip_cap
        assert sum(len(t) for t in trips) == result.best_customers_served
        for group in trips:
            time = 0.0
            prev = depot
            for c in group:
                time += travel_time(model, prev, c.location)
                prev = c.location
            assert time <= params.t_max + 1e-12
        assert path_time(witness, depot, model) == pytest.approx(
            result.best_total_path_time, abs=1e-12
        )
        if result.best_customers_served == 0:
            assert witness.waypoints == (DEPOT, DEPOT)


def test_matches_independent_brute_force():
    rng = np.random.default_rng(97)
    for _ in range(30):
        model = random_model(rng)
        customers = random_customers(rng, int(rng.integers(1, 7)))
        params = RoutingParams(
            t_max=float(rng.uniform(15.0, 40.0)),
            couriers_m=int(rng.integers(1, 3)),
            trips_per_courier_n=int(rng.integers(1, 4)),
        )
        depot = Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))
        result = exact_best_service(depot, customers, model, params)
        ref_served, ref_time = best_service(
            depot, customers, model, params.t_max, params.daily_trip_cap
        )
        assert result.best_customers_served == ref_served
        assert result.best_total_path_time == pytest.approx(ref_time, abs=1e-9)


def test_input_order_does_not_change_the_optimum():
    rng = np.random.default_rng(101)
    model = random_model(rng)
    customers = random_customers(rng, 6)
    params = RoutingParams(t_max=25.0, couriers_m=1, trips_per_courier_n=2)
    depot = Point(40.0, 55.0)
    base = exact_best_service(depot, customers, model, params)
    for _ in range(5):
        shuffled = list(customers)
        rng.shuffle(shuffled)
        again = exact_best_service(depot, shuffled, model, params)
        assert again.best_customers_served == base.best_customers_served
        assert again.best_total_path_time == pytest.approx(
            base.best_total_path_time, abs=1e-9
        )


def test_heuristic_never_beats_oracle():
    rng = np.random.default_rng(103)
    for _ in range(40):
        model = random_model(rng)
        customers = random_customers(rng, int(rng.integers(1, 8)))
        params = RoutingParams(
            t_max=float(rng.uniform(12.0, 35.0)),
            couriers_m=int(rng.integers(1, 3)),
            trips_per_courier_n=int(rng.integers(1, 3)),
        )
        depot = Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))
        heuristic = evaluate_depot(depot, customers, model, params)
        exact = exact_best_service(depot, customers, model, params)
        assert heuristic.customers_served <= exact.best_customers_served


def test_exact_best_depot_prefers_the_collocated_candidate():
    customers = [Customer(i, Point(70.0, 20.0 + i)) for i in range(3)]
    params = RoutingParams(t_max=12.0, couriers_m=1, trips_per_courier_n=2)
    candidates = [Point(5.0, 95.0), Point(70.0, 21.0), Point(95.0, 95.0)]
    best_point, result = exact_best_depot(candidates, customers, UNIT, params)
    assert best_point == Point(70.0, 21.0)
    assert result.best_customers_served == 3


def test_exact_best_depot_agrees_with_search_ranking_on_served_count():
    rng = np.random.default_rng(107)
    for _ in range(8):
        model = random_model(rng)
        customers = random_customers(rng, 5)
        params = RoutingParams(t_max=28.0, couriers_m=1, trips_per_courier_n=2)
        candidates = [
            Point(float(rng.uniform(0, 100)), float(rng.uniform(0, 100))) for _ in range(4)
        ]
        _, exact = exact_best_depot(candidates, customers, model, params)
        ranked = search_level(candidates, customers, model, params)
        assert ranked[0][1].customers_served <= exact.best_customers_served


def test_exact_best_depot_requires_candidates():
    with pytest.raises(ValueError):
        exact_best_depot([], [], UNIT, RoutingParams(30.0, 1, 1))
