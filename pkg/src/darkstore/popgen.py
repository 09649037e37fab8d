"""Seeded synthetic customer populations over a rectangular map."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geo import Point

__all__ = [
    "Customer",
    "MapBounds",
    "generate_uniform",
    "generate_gaussian",
    "write_customers_csv",
    "read_customers_csv",
]


@dataclass(frozen=True)
class Customer:
    """A demand point with a stable integer identifier."""

    id: int
    location: Point


@dataclass(frozen=True)
class MapBounds:
    min: Point
    max: Point

    def __post_init__(self) -> None:
        if not (self.min.x < self.max.x and self.min.y < self.max.y):
            raise ValueError(f"degenerate map bounds: {self.min} .. {self.max}")

    @property
    def center(self) -> Point:
        return Point(0.5 * (self.min.x + self.max.x), 0.5 * (self.min.y + self.max.y))

    @property
    def extent(self) -> tuple[float, float]:
        return (self.max.x - self.min.x, self.max.y - self.min.y)

    def contains(self, p: Point) -> bool:
        return self.min.x <= p.x <= self.max.x and self.min.y <= p.y <= self.max.y


def generate_uniform(bounds: MapBounds, count: int, seed: int) -> list[Customer]:
    """``count`` customers i.i.d. uniform over ``bounds``; deterministic per seed."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(bounds.min.x, bounds.max.x, size=count)
    ys = rng.uniform(bounds.min.y, bounds.max.y, size=count)
    return [Customer(i, Point(float(x), float(y))) for i, (x, y) in enumerate(zip(xs, ys))]


def generate_gaussian(bounds: MapBounds, count: int, sigma: float, seed: int) -> list[Customer]:
    """``count`` customers normal around the map midpoint, ``sigma`` per axis.

    Points falling outside the bounds are rejected and redrawn, so every
    customer lies on the map.  Deterministic per seed.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    rng = np.random.default_rng(seed)
    center = bounds.center
    kept: list[Point] = []
    while len(kept) < count:
        need = count - len(kept)
        xs = rng.normal(center.x, sigma, size=need)
        ys = rng.normal(center.y, sigma, size=need)
        for x, y in zip(xs, ys):
            p = Point(float(x), float(y))
            if bounds.contains(p):
                kept.append(p)
    return [Customer(i, p) for i, p in enumerate(kept)]


def write_customers_csv(path: str | Path, customers: list[Customer]) -> None:
    """Serialize customers as ``id,x,y`` CSV (UTF-8, LF line endings)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "x", "y"])
        for c in customers:
            writer.writerow([c.id, repr(c.location.x), repr(c.location.y)])


def read_customers_csv(path: str | Path) -> list[Customer]:
    """Load an ``id,x,y`` CSV produced by :func:`write_customers_csv`.

    Loaded datasets may lie outside any particular map bounds; callers decide
    whether that matters.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["id", "x", "y"]:
            raise ValueError(f"{path}: expected header id,x,y, got {header}")
        customers = []
        seen: set[int] = set()
        for row in reader:
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}: malformed row {row!r}")
            cid = int(row[0])
            if cid in seen:
                raise ValueError(f"{path}: duplicate customer id {cid}")
            seen.add(cid)
            customers.append(Customer(cid, Point(float(row[1]), float(row[2]))))
    return customers
