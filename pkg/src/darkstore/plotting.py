"""SVG rendering of a scenario result: customers, zones, warehouses, routes.

Pure string assembly against SVG 1.1; map y grows upward, so y coordinates
are reflected before writing.  Route polylines are drawn one per warehouse,
in placement order, colored orange, green, red (cycling past three).
"""

from __future__ import annotations

from pathlib import Path

from .popgen import Customer
from .scenario import OutputError, RunReport, ScenarioConfig, load_population

__all__ = ["ROUTE_COLORS", "render_svg", "emit_plot"]

ROUTE_COLORS = ("orange", "green", "red")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_svg(report: RunReport, config: ScenarioConfig, customers: list[Customer]) -> str:
    bounds = config.bounds
    w, h = bounds.extent
    margin = 0.05 * max(w, h)
    unit = max(w, h) / 100.0  # stroke/marker sizes in map units
    center = bounds.center

    def fy(y: float) -> float:
        return bounds.min.y + bounds.max.y - y

    view = (
        f"{_fmt(bounds.min.x - margin)} {_fmt(bounds.min.y - margin)} "
        f"{_fmt(w + 2 * margin)} {_fmt(h + 2 * margin)}"
    )
    px_w = 720
    px_h = round(px_w * (h + 2 * margin) / (w + 2 * margin))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{px_w}" height="{px_h}" viewBox="{view}">',
        f'<rect x="{_fmt(bounds.min.x - margin)}" y="{_fmt(bounds.min.y - margin)}" '
        f'width="{_fmt(w + 2 * margin)}" height="{_fmt(h + 2 * margin)}" fill="white"/>',
        f'<rect x="{_fmt(bounds.min.x)}" y="{_fmt(bounds.min.y)}" '
        f'width="{_fmt(w)}" height="{_fmt(h)}" fill="none" '
        f'stroke="#333" stroke-width="{_fmt(0.3 * unit)}"/>',
    ]
    # zone boundary circles; shown for every traffic kind so scenarios compare
    for r in config.traffic.zone_radii:
        parts.append(
            f'<circle cx="{_fmt(center.x)}" cy="{_fmt(fy(center.y))}" r="{_fmt(r)}" '
            f'fill="none" stroke="#999" stroke-width="{_fmt(0.25 * unit)}" '
            f'stroke-dasharray="{_fmt(1.5 * unit)} {_fmt(1.5 * unit)}"/>'
        )
    for i, w_entry in enumerate(report.warehouses):
        color = ROUTE_COLORS[i % len(ROUTE_COLORS)]
        loc = w_entry["location"]
        points = [(loc["x"], loc["y"])]
        for trip in w_entry["trips"]:
            points.extend((s["x"], s["y"]) for s in trip["stops"])
            points.append((loc["x"], loc["y"]))
        if len(points) == 1:
            points.append((loc["x"], loc["y"]))  # zero-trip warehouse: degenerate loop
        coords = " ".join(f"{_fmt(x)},{_fmt(fy(y))}" for x, y in points)
        parts.append(
            f'<polyline fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(0.35 * unit)}" points="{coords}"/>'
        )
    for c in customers:
        parts.append(
            f'<circle cx="{_fmt(c.location.x)}" cy="{_fmt(fy(c.location.y))}" '
            f'r="{_fmt(0.5 * unit)}" fill="#444"/>'
        )
    for i, w_entry in enumerate(report.warehouses):
        color = ROUTE_COLORS[i % len(ROUTE_COLORS)]
        loc = w_entry["location"]
        half = 1.4 * unit
        parts.append(
            f'<rect x="{_fmt(loc["x"] - half)}" y="{_fmt(fy(loc["y"]) - half)}" '
            f'width="{_fmt(2 * half)}" height="{_fmt(2 * half)}" '
            f'fill="{color}" stroke="black" stroke-width="{_fmt(0.3 * unit)}"/>'
        )
        parts.append(
            f'<text x="{_fmt(loc["x"] + 2 * half)}" y="{_fmt(fy(loc["y"]) + half)}" '
            f'font-size="{_fmt(3.5 * unit)}" font-family="sans-serif">W{w_entry["index"]}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(
    report: RunReport,
    config: ScenarioConfig,
    path: str | Path | None = None,
) -> Path:
    """Write the scenario SVG; path defaults to the config's plot output."""
    if path is None:
        path = config.output.plot
    if path is None:
        raise OutputError("no plot path: set output.plot in the config or pass one")
    customers = load_population(config)
    target = Path(path)
    try:
        target.write_text(render_svg(report, config, customers), encoding="utf-8", newline="")
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc
    return target
