"""Seeded instance generators: point clouds in general position plus
uniformly sampled edge sets hitting a target density."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .geometry import Point, PointSet, orientation_value
from .graph import GeometricGraph

KINDS = ("uniform-square", "convex-position", "perturbed-grid", "clustered")

# 2**20 keeps collinearity retries rare while the int64 fast paths stay exact.
DEFAULT_COORD_RANGE = 2**20


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    density: Fraction
    seed: int
    coordinate_range: int = DEFAULT_COORD_RANGE

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if self.n < 4:
            raise ValueError(f"n must be >= 4, got {self.n}")
        d = Fraction(self.density)
        object.__setattr__(self, "density", d)
        if not 0 < d <= 1:
            raise ValueError(f"density must lie in (0, 1], got {d}")
        if self.coordinate_range < 4:
            raise ValueError("coordinate_range too small")


class GenerationError(RuntimeError):
    """General position could not be reached within the retry budget."""


def _collinear_with(pts: list[Point], cand: Point) -> bool:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if orientation_value(pts[i], pts[j], cand) == 0:
                return True
    return False


def _fill_general_position(n, rng, propose, retries_per_point=200) -> PointSet:
    pts: list[Point] = []
    used: set[tuple[int, int]] = set()
    for i in range(n):
        for attempt in range(retries_per_point):
            x, y = propose(i, attempt, rng)
            if (x, y) in used:
                continue
            cand = Point(int(x), int(y))
            if not _collinear_with(pts, cand):
                pts.append(cand)
                used.add((x, y))
                break
        else:
            raise GenerationError(
                f"could not place point {i} in general position after "
                f"{retries_per_point} tries; enlarge coordinate_range"
            )
    return PointSet(tuple(pts))


def _uniform_square(n, rng, crange):
    return _fill_general_position(
        n, rng, lambda i, a, r: (r.randrange(crange), r.randrange(crange))
    )


def _convex_position(n, rng, crange):
    radius = max(4, crange // 2 - 1)
    for attempt in range(16):
        jitter = rng.random() * 0.01
        coords = []
        for i in range(n):
            ang = 2 * math.pi * i / n + jitter
            coords.append((round(radius * math.cos(ang)), round(radius * math.sin(ang))))
        try:
            ps = PointSet.from_coords(coords)
        except ValueError:
            continue
        turns = [
            orientation_value(ps[i], ps[(i + 1) % n], ps[(i + 2) % n]) for i in range(n)
        ]
        if all(v > 0 for v in turns) or all(v < 0 for v in turns):
            return ps
    # Parabolic arc: strictly convex, never collinear, always valid.
    half = n // 2
    return PointSet.from_coords([(t, t * t) for t in range(-half, n - half)])


def _perturbed_grid(n, rng, crange):
    side = math.ceil(math.sqrt(n))
    cell = max(4, crange // side)
    wiggle = max(1, cell // 2)

    def propose(i, attempt, r):
        gx, gy = i % side, i // side
        return (gx * cell + r.randrange(wiggle), gy * cell + r.randrange(wiggle))

    return _fill_general_position(n, rng, propose)


def _clustered(n, rng, crange):
    nc = max(2, min(6, n // 6))
    spread = max(4, crange // (6 * nc))
    centers = [
        (rng.randrange(spread, crange - spread), rng.randrange(spread, crange - spread))
        for _ in range(nc)
    ]

    def propose(i, attempt, r):
        cx, cy = centers[i % nc]
        return (cx + r.randrange(-spread, spread + 1), cy + r.randrange(-spread, spread + 1))

    return _fill_general_position(n, rng, propose)


_POINT_GENERATORS = {
    "uniform-square": _uniform_square,
    "convex-position": _convex_position,
    "perturbed-grid": _perturbed_grid,
    "clustered": _clustered,
}


def generate_points(kind: str, n: int, seed: int, coordinate_range: int = DEFAULT_COORD_RANGE) -> PointSet:
    rng = random.Random(seed)
    return _POINT_GENERATORS[kind](n, rng, coordinate_range)


def generate(spec: GeneratorSpec) -> GeometricGraph:
    """Reproducible instance: points per kind, then a uniform edge sample of
    exactly ceil(density * C(n,2)) edges (the complete graph at density 1)."""
    rng = random.Random(spec.seed)
    points = _POINT_GENERATORS[spec.kind](spec.n, rng, spec.coordinate_range)
    n = spec.n
    target = math.ceil(spec.density * comb(n, 2))
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if target >= len(all_pairs):
        edges = all_pairs
    else:
        edges = sorted(rng.sample(all_pairs, target))
    return GeometricGraph(points, tuple(edges))
