"""Dark-store warehouse placement solver.

Places N warehouses on a customer map to maximize customers served under a
per-trip delivery-time cap and a daily trip budget, using multi-resolution
grid search over candidate locations with a trip-splitting 2-opt routing
core.  Travel times come from a concentric-zone traffic model (uniform
travel is the single-zone case).
"""

from .geo import Point, TrafficModel, travel_time, travel_time_matrix, zone_multiplier
from .oracle import OracleResult, exact_best_depot, exact_best_service
from .placer import (
    Placement,
    SearchParams,
    SearchStats,
    find_best_location,
    grid_points,
    place_warehouses,
    search_level,
)
from .popgen import (
    Customer,
    MapBounds,
    generate_gaussian,
    generate_uniform,
    read_customers_csv,
    write_customers_csv,
)
from .router import (
    DEPOT,
    DepotEvaluation,
    MultiTripPath,
    RoutingParams,
    TripPlan,
    evaluate_depot,
    path_time,
    select_top_trips,
    serviceable_set,
    split_into_trips,
    two_opt_improve,
)
from .plotting import ROUTE_COLORS, emit_plot, render_svg
from .scenario import (
    BenchmarkRow,
    ConfigError,
    OutputError,
    RunReport,
    ScenarioConfig,
    bundled_case_names,
    load_bundled_config,
    load_population,
    parse_config,
    run_scaling_benchmark,
    run_scenario,
    validate_config,
)

__version__ = "0.1.0"

__all__ = [
    "Point",
    "TrafficModel",
    "zone_multiplier",
    "travel_time",
    "travel_time_matrix",
    "Customer",
    "MapBounds",
    "generate_uniform",
    "generate_gaussian",
    "read_customers_csv",
    "write_customers_csv",
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
    "SearchParams",
    "Placement",
    "SearchStats",
    "grid_points",
    "search_level",
    "find_best_location",
    "place_warehouses",
    "OracleResult",
    "exact_best_service",
    "exact_best_depot",
    "ConfigError",
    "OutputError",
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
    "ROUTE_COLORS",
    "render_svg",
    "emit_plot",
    "__version__",
]
