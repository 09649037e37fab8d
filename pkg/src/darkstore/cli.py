"""Command-line entry point.

Subcommands: run a scenario config, generate a customer population, run the
scaling benchmark, and spot-check the router against the exhaustive oracle.
Exit codes: 0 success, 1 validation error (or failed check), 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .geo import Point, TrafficModel
from .oracle import exact_best_service
from .popgen import Customer, MapBounds, generate_gaussian, generate_uniform, write_customers_csv
from .router import RoutingParams, evaluate_depot
from .scenario import (
    REFERENCE_DOUBLING_FACTOR,
    ConfigError,
    OutputError,
    ScenarioConfig,
    bundled_case_names,
    load_bundled_config,
    run_scaling_benchmark,
    run_scenario,
    validate_config,
)

__all__ = ["main"]


def _load_raw_config(ref: str) -> dict:
    """Config by file path, or by bundled case name when no such file exists."""
    p = Path(ref)
    if p.exists():
        try:
            return json.loads(p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {ref}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{ref}: not valid JSON: {exc}") from exc
    if "/" not in ref and "\\" not in ref and not ref.endswith(".json"):
        return load_bundled_config(ref)
    raise ConfigError(f"config file not found: {ref}")


def _apply_overrides(raw: dict, sets: list[str], seed: int | None) -> dict:
    for item in sets:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects section.field=value, got {item!r}")
        parts = key.split(".")
        if len(parts) != 2:
            raise ConfigError(f"--set expects section.field=value, got {item!r}")
        section, fieldname = parts
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        raw.setdefault(section, {})[fieldname] = parsed
    if seed is not None:
        raw.setdefault("population", {})["seed"] = seed
    return raw


def _resolve_config(ref: str, sets: list[str], seed: int | None) -> ScenarioConfig:
    return validate_config(_apply_overrides(_load_raw_config(ref), sets, seed))


def _cmd_run(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config, args.set, args.seed)
    report = run_scenario(config, out_dir=args.out_dir)
    print(f"customers: {report.totals['customers']}")
    for w in report.warehouses:
        loc = w["location"]
        print(
            f"warehouse {w['index']}: ({loc['x']:.2f}, {loc['y']:.2f})  "
            f"served {w['customers_served']} over {len(w['trips'])} trips, "
            f"path {w['total_path_time_minutes']:.1f} min"
        )
    print(f"served {report.totals['served']} / {report.totals['customers']}")
    for phase, seconds in report.timings_s.items():
        print(f"time {phase}: {seconds:.2f}s")
    for key in ("report", "routes", "plot", "population"):
        path = getattr(config.output, key)
        if path:
            base = Path(args.out_dir) if args.out_dir else Path(".")
            print(f"wrote {key}: {base / path}")
    return 0


def _cmd_gen_pop(args: argparse.Namespace) -> int:
    try:
        parts = [float(v) for v in args.bounds.split(",")]
    except ValueError:
        parts = []
    if len(parts) != 4:
        raise ConfigError(f"--bounds expects minx,miny,maxx,maxy, got {args.bounds!r}")
    if parts[0] >= parts[2] or parts[1] >= parts[3]:
        raise ConfigError(f"--bounds describes an empty map: {args.bounds!r}")
    bounds = MapBounds(Point(parts[0], parts[1]), Point(parts[2], parts[3]))
    if args.count < 0:
        raise ConfigError(f"--count must be >= 0, got {args.count}")
    if args.kind == "uniform":
        customers = generate_uniform(bounds, args.count, args.seed)
    else:
        if args.sigma <= 0:
            raise ConfigError(f"--sigma must be > 0, got {args.sigma}")
        customers = generate_gaussian(bounds, args.count, args.sigma, args.seed)
    try:
        write_customers_csv(args.out, customers)
    except OSError as exc:
        raise OutputError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {len(customers)} customers: {args.out}")
    return 0


def _cmd_bench_scaling(args: argparse.Namespace) -> int:
    if args.config:
        config = _resolve_config(args.config, args.set, args.seed)
    else:
        config = validate_config(_apply_overrides({}, args.set, args.seed))
    try:
        sizes = [int(v) for v in args.sizes.split(",")]
    except ValueError:
        raise ConfigError(f"--sizes expects a comma list of integers, got {args.sizes!r}")
    if sizes != sorted(sizes) or len(set(sizes)) != len(sizes) or not sizes:
        raise ConfigError(f"--sizes must be ascending, got {args.sizes!r}")
    rows = run_scaling_benchmark(config, sizes)
    print(f"{'size':>8} {'seconds':>10} {'ratio':>8}")
    for row in rows:
        ratio = "-" if row.ratio is None else f"{row.ratio:.2f}"
        print(f"{row.size:>8} {row.seconds:>10.3f} {ratio:>8}")
    print(
        f"reference slowdown per doubling: ~{REFERENCE_DOUBLING_FACTOR:.0f}x "
        f"(hardware-dependent; measured ratios above)"
    )
    return 0


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    if args.max_customers < 1 or args.max_customers > 7:
        raise ConfigError(f"--max-customers must be in 1..7, got {args.max_customers}")
    rng = np.random.default_rng(args.seed)
    violations = 0
    gaps: list[int] = []
    for _ in range(args.instances):
        n = int(rng.integers(1, args.max_customers + 1))
        pts = rng.uniform(0.0, 100.0, size=(n + 1, 2))
        depot = Point(float(pts[0, 0]), float(pts[0, 1]))
        customers = [Customer(i, Point(float(x), float(y))) for i, (x, y) in enumerate(pts[1:])]
        if rng.random() < 0.5:
            model = TrafficModel.uniform(float(rng.uniform(0.5, 2.0)))
        else:
            model = TrafficModel(
                center=Point(50.0, 50.0),
                zone_radii=(20.0, 40.0),
                multipliers=(3.0, 2.0, 1.0),
            )
        params = RoutingParams(
            t_max=float(rng.uniform(40.0, 160.0)),
            couriers_m=1,
            trips_per_courier_n=int(rng.integers(1, 4)),
        )
        heuristic = evaluate_depot(depot, customers, model, params)
        optimum = exact_best_service(depot, customers, model, params)
        gap = optimum.best_customers_served - heuristic.customers_served
        gaps.append(gap)
        if gap < 0:
            violations += 1
    mean_gap = sum(gaps) / len(gaps) if gaps else 0.0
    max_gap = max(gaps, default=0)
    print(f"instances: {args.instances}")
    print(f"dominance violations (heuristic > exact optimum): {violations}")
    print(f"gap to optimum: mean {mean_gap:.3f}, max {max_gap}")
    return 1 if violations else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darkstore",
        description="Place dark-store warehouses to maximize customers served "
        "under delivery-time and trip-budget constraints.",
        epilog="bundled configs: " + ", ".join(bundled_case_names()),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config end to end")
    p_run.add_argument("config", help="config file path or bundled case name")
    p_run.add_argument("--seed", type=int, default=None, help="override population.seed")
    p_run.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.FIELD=VALUE",
        help="override any config field (value parsed as JSON; repeatable)",
    )
    p_run.add_argument("--out-dir", default=None, help="directory for the configured outputs")
    p_run.set_defaults(func=_cmd_run)

    p_gen = sub.add_parser("gen-pop", help="generate a customer population CSV")
    p_gen.add_argument("--kind", choices=("uniform", "gaussian"), default="uniform")
    p_gen.add_argument("--count", type=int, default=200)
    p_gen.add_argument("--sigma", type=float, default=20.0, help="gaussian std dev per axis")
    p_gen.add_argument("--seed", type=int, default=7)
    p_gen.add_argument("--bounds", default="0,0,100,100", metavar="MINX,MINY,MAXX,MAXY")
    p_gen.add_argument("--out", required=True, help="output CSV path")
    p_gen.set_defaults(func=_cmd_gen_pop)

    p_bench = sub.add_parser("bench-scaling", help="time the search at growing sizes")
    p_bench.add_argument("config", nargs="?", default=None, help="base config (default: built-in)")
    p_bench.add_argument("--sizes", default="50,100,200", help="ascending population sizes")
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--set", action="append", default=[], metavar="SECTION.FIELD=VALUE")
    p_bench.set_defaults(func=_cmd_bench_scaling)

    p_oracle = sub.add_parser("oracle-check", help="compare the router against brute force")
    p_oracle.add_argument("--instances", type=int, default=50)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--max-customers", type=int, default=7)
    p_oracle.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OutputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
