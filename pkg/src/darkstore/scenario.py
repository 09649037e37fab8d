"""Scenario configuration, end-to-end runs, reports, and the scaling benchmark.

A scenario is described by one JSON document (see the bundled configs under
``darkstore/configs/``).  Every field has a default, so a config file may
specify any subset; unknown keys are rejected and every diagnostic names the
offending field path.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .geo import Point, TrafficModel, travel_time
from .popgen import (
    Customer,
    MapBounds,
    generate_gaussian,
    generate_uniform,
    read_customers_csv,
    write_customers_csv,
)
from .placer import Placement, SearchParams, SearchStats, place_warehouses
from .router import RoutingParams, two_opt_improve

__all__ = [
    "ConfigError",
    "OutputError",
    "PopulationSpec",
    "TrafficSpec",
    "OutputSpec",
    "ScenarioConfig",
    "RunReport",
    "BenchmarkRow",
    "parse_config",
    "validate_config",
    "bundled_case_names",
    "load_bundled_config",
    "load_population",
    "run_scenario",
    "run_scaling_benchmark",
    "REFERENCE_DOUBLING_FACTOR",
]

# widely cited reference slowdown per doubling of the customer count, for
# comparison against measured ratios (hardware-dependent, never asserted)
REFERENCE_DOUBLING_FACTOR = 7.0


class ConfigError(ValueError):
    """Invalid scenario configuration; message names the offending field."""


class OutputError(OSError):
    """An output file could not be written; message names the path."""


@dataclass(frozen=True)
class PopulationSpec:
    kind: str = "uniform"  # uniform | gaussian | file
    count: int = 200
    sigma: float = 20.0
    seed: int = 7
    path: str | None = None


@dataclass(frozen=True)
class TrafficSpec:
    kind: str = "uniform"  # uniform | zones
    multipliers: tuple[float, ...] = (1.0,)
    # boundary circles; with kind=uniform they only appear on plots
    zone_radii: tuple[float, ...] = (20.0, 40.0)


@dataclass(frozen=True)
class OutputSpec:
    report: str | None = None
    routes: str | None = None
    plot: str | None = None
    population: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    bounds: MapBounds
    population: PopulationSpec
    traffic: TrafficSpec
    routing: RoutingParams
    search: SearchParams
    output: OutputSpec

    def traffic_model(self) -> TrafficModel:
        center = self.bounds.center
        if self.traffic.kind == "uniform":
            return TrafficModel(center=center, zone_radii=(), multipliers=self.traffic.multipliers)
        return TrafficModel(
            center=center,
            zone_radii=self.traffic.zone_radii,
            multipliers=self.traffic.multipliers,
        )

    def to_dict(self) -> dict:
        """Canonical dict form; re-validating it reproduces this config."""
        return {
            "map": {
                "min_x": self.bounds.min.x,
                "min_y": self.bounds.min.y,
                "max_x": self.bounds.max.x,
                "max_y": self.bounds.max.y,
            },
            "population": {
                "kind": self.population.kind,
                "count": self.population.count,
                "sigma": self.population.sigma,
                "seed": self.population.seed,
                "path": self.population.path,
            },
            "traffic": {
                "kind": self.traffic.kind,
                "multipliers": list(self.traffic.multipliers),
                "zone_radii": list(self.traffic.zone_radii),
            },
            "routing": {
                "t_max": self.routing.t_max,
                "couriers": self.routing.couriers_m,
                "trips_per_courier": self.routing.trips_per_courier_n,
            },
            "search": {
                "coarse_grid": self.search.coarse_grid,
                "refine_grid": self.search.refine_grid,
                "keep_fraction": self.search.keep_fraction,
                "shrink_factor": self.search.shrink_factor,
                "levels": self.search.levels,
                "warehouses": self.search.n_warehouses,
            },
            "output": {
                "report": self.output.report,
                "routes": self.output.routes,
                "plot": self.output.plot,
                "population": self.output.population,
            },
        }


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(d: dict, path: str, allowed: set[str]) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown key")


def _number(d: dict, path: str, key: str, default):
    value = d.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _integer(d: dict, path: str, key: str, default):
    value = d.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


def _number_list(d: dict, path: str, key: str, default):
    value = d.get(key, default)
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{path}.{key}: expected a list of numbers, got {value!r}")
    out = []
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"{path}.{key}: expected a list of numbers, got {value!r}")
        out.append(float(item))
    return tuple(out)


def _optional_str(d: dict, path: str, key: str):
    value = d.get(key)
    if value is not None and not isinstance(value, str):
        raise ConfigError(f"{path}.{key}: expected a string or null, got {value!r}")
    return value


def _parse_map(d: dict) -> MapBounds:
    _reject_unknown(d, "map", {"min_x", "min_y", "max_x", "max_y"})
    min_x = _number(d, "map", "min_x", 0.0)
    min_y = _number(d, "map", "min_y", 0.0)
    max_x = _number(d, "map", "max_x", 100.0)
    max_y = _number(d, "map", "max_y", 100.0)
    if min_x >= max_x:
        raise ConfigError(f"map.max_x: must exceed map.min_x ({min_x} >= {max_x} is empty)")
    if min_y >= max_y:
        raise ConfigError(f"map.max_y: must exceed map.min_y ({min_y} >= {max_y} is empty)")
    return MapBounds(Point(min_x, min_y), Point(max_x, max_y))


def _parse_population(d: dict) -> PopulationSpec:
    _reject_unknown(d, "population", {"kind", "count", "sigma", "seed", "path"})
    kind = d.get("kind", "uniform")
    if kind not in ("uniform", "gaussian", "file"):
        raise ConfigError(f"population.kind: expected uniform, gaussian or file, got {kind!r}")
    count = _integer(d, "population", "count", 200)
    if count < 0:
        raise ConfigError(f"population.count: must be >= 0, got {count}")
    sigma = _number(d, "population", "sigma", 20.0)
    if sigma <= 0:
        raise ConfigError(f"population.sigma: must be > 0, got {sigma}")
    seed = _integer(d, "population", "seed", 7)
    path = _optional_str(d, "population", "path")
    if kind == "file" and path is None:
        raise ConfigError('population.path: required when population.kind is "file"')
    return PopulationSpec(kind=kind, count=count, sigma=sigma, seed=seed, path=path)


def _parse_traffic(d: dict) -> TrafficSpec:
    _reject_unknown(d, "traffic", {"kind", "multipliers", "zone_radii"})
    kind = d.get("kind", "uniform")
    if kind not in ("uniform", "zones"):
        raise ConfigError(f"traffic.kind: expected uniform or zones, got {kind!r}")
    multipliers = _number_list(d, "traffic", "multipliers", [1.0])
    zone_radii = _number_list(d, "traffic", "zone_radii", [20.0, 40.0])
    if any(m <= 0 for m in multipliers):
        raise ConfigError(f"traffic.multipliers: must all be > 0, got {list(multipliers)}")
    if any(r <= 0 for r in zone_radii):
        raise ConfigError(f"traffic.zone_radii: must all be > 0, got {list(zone_radii)}")
    if any(b <= a for a, b in zip(zone_radii, zone_radii[1:])):
        raise ConfigError(f"traffic.zone_radii: must be strictly ascending, got {list(zone_radii)}")
    if kind == "uniform":
        if len(multipliers) != 1:
            raise ConfigError(
                f"traffic.multipliers: uniform traffic takes exactly one multiplier, "
                f"got {len(multipliers)}"
            )
    else:
        if not zone_radii:
            raise ConfigError("traffic.zone_radii: zones traffic needs at least one radius")
        if len(multipliers) != len(zone_radii) + 1:
            raise ConfigError(
                f"traffic.multipliers: zones traffic needs len(zone_radii)+1 multipliers "
                f"({len(zone_radii) + 1}), got {len(multipliers)}"
            )
    return TrafficSpec(kind=kind, multipliers=multipliers, zone_radii=zone_radii)


def _parse_routing(d: dict) -> RoutingParams:
    _reject_unknown(d, "routing", {"t_max", "couriers", "trips_per_courier"})
    t_max = _number(d, "routing", "t_max", 30.0)
    if t_max <= 0:
        raise ConfigError(f"routing.t_max: must be > 0, got {t_max}")
    couriers = _integer(d, "routing", "couriers", 3)
    if couriers < 1:
        raise ConfigError(f"routing.couriers: must be >= 1, got {couriers}")
    trips = _integer(d, "routing", "trips_per_courier", 5)
    if trips < 1:
        raise ConfigError(f"routing.trips_per_courier: must be >= 1, got {trips}")
    return RoutingParams(t_max=t_max, couriers_m=couriers, trips_per_courier_n=trips)


def _parse_search(d: dict) -> SearchParams:
    _reject_unknown(
        d,
        "search",
        {"coarse_grid", "refine_grid", "keep_fraction", "shrink_factor", "levels", "warehouses"},
    )
    coarse = _integer(d, "search", "coarse_grid", 10)
    if coarse < 1:
        raise ConfigError(f"search.coarse_grid: must be >= 1, got {coarse}")
    refine = _integer(d, "search", "refine_grid", 4)
    if refine < 1:
        raise ConfigError(f"search.refine_grid: must be >= 1, got {refine}")
    keep = _number(d, "search", "keep_fraction", 0.05)
    if not 0.0 < keep <= 1.0:
        raise ConfigError(f"search.keep_fraction: must be in (0, 1], got {keep}")
    shrink = _number(d, "search", "shrink_factor", 5.0)
    if shrink <= 0:
        raise ConfigError(f"search.shrink_factor: must be > 0, got {shrink}")
    levels = _integer(d, "search", "levels", 3)
    if levels < 0:
        raise ConfigError(f"search.levels: must be >= 0, got {levels}")
    warehouses = _integer(d, "search", "warehouses", 3)
    if warehouses < 1:
        raise ConfigError(f"search.warehouses: must be >= 1, got {warehouses}")
    return SearchParams(
        coarse_grid=coarse,
        refine_grid=refine,
        keep_fraction=keep,
        shrink_factor=shrink,
        levels=levels,
        n_warehouses=warehouses,
    )


def _parse_output(d: dict) -> OutputSpec:
    _reject_unknown(d, "output", {"report", "routes", "plot", "population"})
    return OutputSpec(
        report=_optional_str(d, "output", "report"),
        routes=_optional_str(d, "output", "routes"),
        plot=_optional_str(d, "output", "plot"),
        population=_optional_str(d, "output", "population"),
    )


def validate_config(data) -> ScenarioConfig:
    """Validate a raw config mapping; raises ConfigError naming field paths."""
    top = _require_mapping(data, "config")
    _reject_unknown(top, "config", {"map", "population", "traffic", "routing", "search", "output"})
    return ScenarioConfig(
        bounds=_parse_map(_require_mapping(top.get("map", {}), "map")),
        population=_parse_population(_require_mapping(top.get("population", {}), "population")),
        traffic=_parse_traffic(_require_mapping(top.get("traffic", {}), "traffic")),
        routing=_parse_routing(_require_mapping(top.get("routing", {}), "routing")),
        search=_parse_search(_require_mapping(top.get("search", {}), "search")),
        output=_parse_output(_require_mapping(top.get("output", {}), "output")),
    )


def parse_config(path: str | Path) -> ScenarioConfig:
    """Load and validate a JSON scenario config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    return validate_config(data)


def bundled_case_names() -> list[str]:
    """Names of the scenario configs shipped with the package."""
    pkg = resources.files("darkstore") / "configs"
    return sorted(p.name.removesuffix(".json") for p in pkg.iterdir() if p.name.endswith(".json"))


def load_bundled_config(name: str) -> dict:
    """Raw dict of a bundled scenario config by name."""
    pkg = resources.files("darkstore") / "configs" / f"{name}.json"
    try:
        return json.loads(pkg.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        known = ", ".join(bundled_case_names())
        raise ConfigError(f"unknown bundled config {name!r} (bundled: {known})") from exc


def load_population(config: ScenarioConfig) -> list[Customer]:
    """Generate or load the customer set described by the config."""
    pop = config.population
    if pop.kind == "uniform":
        return generate_uniform(config.bounds, pop.count, pop.seed)
    if pop.kind == "gaussian":
        return generate_gaussian(config.bounds, pop.count, pop.sigma, pop.seed)
    try:
        return read_customers_csv(pop.path)
    except OSError as exc:
        raise ConfigError(f"population.path: cannot read {pop.path}: {exc}") from exc


@dataclass
class RunReport:
    """Everything a scenario run produced.

    ``timings_s`` (wall-clock seconds per phase) stays out of the JSON form
    so that reruns with the same seed serialize byte-identically.
    """

    config: dict
    seed: int
    totals: dict
    warehouses: list[dict]
    unserved_ids: list[int]
    budget: dict
    timings_s: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "seed": self.seed,
            "totals": self.totals,
            "warehouses": self.warehouses,
            "unserved_ids": self.unserved_ids,
            "budget": self.budget,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def _warehouse_dict(
    index: int,
    location: Point,
    evaluation,
    customers_by_id: dict[int, Customer],
    model: TrafficModel,
) -> dict:
    trips = []
    for t_index, trip in enumerate(evaluation.trips, start=1):
        stops = []
        prev = location
        for seq, cid in enumerate(trip.customer_ids, start=1):
            loc = customers_by_id[cid].location
            stops.append(
                {
                    "seq": seq,
                    "customer_id": cid,
                    "x": loc.x,
                    "y": loc.y,
                    "leg_minutes": travel_time(model, prev, loc),
                }
            )
            prev = loc
        trips.append(
            {
                "trip": t_index,
                "deliveries": trip.deliveries,
                "trip_time_minutes": trip.trip_time,
                "stops": stops,
            }
        )
    return {
        "index": index,
        "location": {"x": location.x, "y": location.y},
        "customers_served": evaluation.customers_served,
        "total_path_time_minutes": evaluation.total_path_time,
        "trips": trips,
    }


def build_report(
    config: ScenarioConfig,
    customers: list[Customer],
    placement: Placement,
    stats: SearchStats,
    timings_s: dict[str, float] | None = None,
) -> RunReport:
    model = config.traffic_model()
    by_id = {c.id: c for c in customers}
    warehouses = [
        _warehouse_dict(i, loc, ev, by_id, model)
        for i, (loc, ev) in enumerate(placement.warehouses, start=1)
    ]
    served = sum(w["customers_served"] for w in warehouses)
    return RunReport(
        config=config.to_dict(),
        seed=config.population.seed,
        totals={
            "customers": len(customers),
            "served": served,
            "unserved": len(customers) - served,
            "trips": sum(len(w["trips"]) for w in warehouses),
        },
        warehouses=warehouses,
        unserved_ids=sorted(placement.unserved),
        budget={
            "depot_evaluations": stats.depot_evaluations,
            "per_warehouse": list(stats.per_warehouse),
        },
        timings_s=dict(timings_s or {}),
    )


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def write_routes_csv(path: str, report: RunReport) -> None:
    """Flat per-stop route table: warehouse,trip,stop_seq,customer_id,x,y,leg_minutes."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["warehouse", "trip", "stop_seq", "customer_id", "x", "y", "leg_minutes"]
            )
            for w in report.warehouses:
                for trip in w["trips"]:
                    for stop in trip["stops"]:
                        writer.writerow(
                            [
                                w["index"],
                                trip["trip"],
                                stop["seq"],
                                stop["customer_id"],
                                repr(stop["x"]),
                                repr(stop["y"]),
                                repr(stop["leg_minutes"]),
                            ]
                        )
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def run_scenario(config: ScenarioConfig, out_dir: str | Path | None = None) -> RunReport:
    """End-to-end pipeline: population, placement, reports and plots.

    Output paths from the config are interpreted relative to ``out_dir``
    (default: current directory).  Deterministic per seed.
    """
    from .plotting import render_svg  # local import: plotting needs RunReport

    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    customers = load_population(config)
    timings["population"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    stats = SearchStats()
    placement = place_warehouses(
        customers,
        config.bounds,
        config.traffic_model(),
        config.routing,
        config.search,
        stats,
    )
    timings["search"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    report = build_report(config, customers, placement, stats, timings)
    base = Path(out_dir) if out_dir is not None else Path(".")

    def _resolve(p: str) -> str:
        return str(base / p)

    if config.output.report:
        _write_text(_resolve(config.output.report), report.to_json())
    if config.output.routes:
        write_routes_csv(_resolve(config.output.routes), report)
    if config.output.plot:
        _write_text(_resolve(config.output.plot), render_svg(report, config, customers))
    if config.output.population:
        try:
            write_customers_csv(_resolve(config.output.population), customers)
        except OSError as exc:
            raise OutputError(f"cannot write {config.output.population}: {exc}") from exc
    timings["outputs"] = time.perf_counter() - t0
    report.timings_s = timings
    return report


@dataclass(frozen=True)
class BenchmarkRow:
    size: int
    seconds: float
    ratio: float | None  # vs the previous (smaller) size


def run_scaling_benchmark(base_config: ScenarioConfig, sizes: list[int]) -> list[BenchmarkRow]:
    """Single-warehouse search wall-clock time at each population size.

    Sizes must be ascending.  The smallest size is run once untimed first to
    warm the compiled routing core, so measurements only cover the search.
    """
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be ascending, got {sizes}")
    if not sizes:
        return []

    def _config_at(size: int) -> ScenarioConfig:
        return ScenarioConfig(
            bounds=base_config.bounds,
            population=PopulationSpec(
                kind=base_config.population.kind,
                count=size,
                sigma=base_config.population.sigma,
                seed=base_config.population.seed,
                path=base_config.population.path,
            ),
            traffic=base_config.traffic,
            routing=base_config.routing,
            search=SearchParams(
                coarse_grid=base_config.search.coarse_grid,
                refine_grid=base_config.search.refine_grid,
                keep_fraction=base_config.search.keep_fraction,
                shrink_factor=base_config.search.shrink_factor,
                levels=base_config.search.levels,
                n_warehouses=1,
            ),
            output=OutputSpec(),
        )

    def _search(size: int) -> float:
        config = _config_at(size)
        customers = load_population(config)
        t0 = time.perf_counter()
        place_warehouses(
            customers, config.bounds, config.traffic_model(), config.routing, config.search
        )
        return time.perf_counter() - t0

    # warm-up, untimed: a tiny search alone can miss the compiled 2-opt core
    # (a sparse population may never put two customers in range of one
    # candidate), so route a fixed pair explicitly first
    two_opt_improve(
        Point(0.0, 0.0),
        [Customer(0, Point(1.0, 0.0)), Customer(1, Point(0.0, 1.0))],
        base_config.traffic_model(),
        RoutingParams(t_max=1e9, couriers_m=1, trips_per_courier_n=1),
    )
    _search(max(1, math.ceil(sizes[0] / 5)))

    rows: list[BenchmarkRow] = []
    prev: float | None = None
    for size in sizes:
        seconds = _search(size)
        ratio = None if prev is None else seconds / prev
        rows.append(BenchmarkRow(size=size, seconds=seconds, ratio=ratio))
        prev = seconds
    return rows
