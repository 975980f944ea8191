"""Exact planar geometry: orientation signs, segment crossings, order types.

Everything in this module is integer arithmetic. Predicates never touch
floating point, so crossing counts and every certificate built on top of
them are bit-exact. This is the trust anchor for the rest of the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

# Coordinates are confined to 32 bits so the orientation determinant fits in
# 128 bits for fixed-width consumers. Python integers are unbounded, so the
# predicates here are exact regardless of magnitude.
COORD_LIMIT = 2**31

# Vectorized int64 code needs |det| < 2**63, which holds whenever all
# coordinates are below 2**30 in absolute value. Larger coordinates fall back
# to pure-Python integers.
INT64_SAFE_COORD = 2**30


class OrientationSign(enum.Enum):
    """Position of r relative to the directed line p -> q.

    MINUS: r lies strictly to the left. PLUS: strictly to the right.
    ZERO: the three points are collinear (never produced by a valid
    PointSet, which enforces general position).
    """

    MINUS = "-"
    PLUS = "+"
    ZERO = "0"

    def flipped(self) -> "OrientationSign":
        if self is OrientationSign.MINUS:
            return OrientationSign.PLUS
        if self is OrientationSign.PLUS:
            return OrientationSign.MINUS
        return OrientationSign.ZERO


@dataclass(frozen=True)
class Point:
    """Immutable planar point with exact integer coordinates."""

    x: int
    y: int

    def __post_init__(self) -> None:
        for name, v in (("x", self.x), ("y", self.y)):
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"coordinate {name} must be int, got {type(v).__name__}")
            if not -COORD_LIMIT <= v < COORD_LIMIT:
                raise ValueError(f"coordinate {name}={v} does not fit in 32 bits")


def orientation_value(p: Point, q: Point, r: Point) -> int:
    """Signed doubled area of the triangle (p, q, r).

    Positive when r is strictly left of the directed line p -> q.
    """
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orientation(p: Point, q: Point, r: Point) -> OrientationSign:
    """Exact orientation sign of the ordered triple (p, q, r).

    Left gets MINUS, right gets PLUS (sign convention of the triple maps
    used throughout this package), collinear gets ZERO.
    """
    v = orientation_value(p, q, r)
    if v > 0:
        return OrientationSign.MINUS
    if v < 0:
        return OrientationSign.PLUS
    return OrientationSign.ZERO


class CollinearError(ValueError):
    """A point set violates general position; carries the offending triple."""

    def __init__(self, i: int, j: int, k: int, points: tuple[Point, Point, Point]):
        self.triple = (i, j, k)
        self.points = points
        super().__init__(
            f"points {i}, {j}, {k} are collinear: "
            f"({points[0].x},{points[0].y}) ({points[1].x},{points[1].y}) "
            f"({points[2].x},{points[2].y})"
        )


def _find_collinear_triple(points: Sequence[Point]) -> tuple[int, int, int] | None:
    n = len(points)
    if n < 3:
        return None
    max_abs = max(max(abs(p.x), abs(p.y)) for p in points)
    if n > 48 and max_abs < INT64_SAFE_COORD:
        arr = np.array([(p.x, p.y) for p in points], dtype=np.int64)
        for i in range(n - 2):
            v = arr[i + 1 :] - arr[i]
            cross = v[:, 0][:, None] * v[:, 1][None, :] - v[:, 1][:, None] * v[:, 0][None, :]
            hits = np.argwhere(np.triu(cross == 0, k=1))
            if hits.size:
                j, k = int(hits[0][0]), int(hits[0][1])
                return (i, i + 1 + j, i + 1 + k)
        return None
    for i, j, k in combinations(range(n), 3):
        if orientation_value(points[i], points[j], points[k]) == 0:
            return (i, j, k)
    return None


@dataclass(frozen=True)
class PointSet:
    """Finite planar point set in general position; ids are list positions.

    Construction rejects duplicate points and any collinear triple, so all
    downstream predicates may assume nonzero orientations.
    """

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        seen: dict[tuple[int, int], int] = {}
        for i, p in enumerate(pts):
            if not isinstance(p, Point):
                raise TypeError(f"entry {i} is not a Point")
            key = (p.x, p.y)
            if key in seen:
                raise ValueError(f"duplicate point ({p.x},{p.y}) at ids {seen[key]} and {i}")
            seen[key] = i
        bad = _find_collinear_triple(pts)
        if bad is not None:
            i, j, k = bad
            raise CollinearError(i, j, k, (pts[i], pts[j], pts[k]))

    @classmethod
    def from_coords(cls, coords: Iterable[tuple[int, int]]) -> "PointSet":
        return cls(tuple(Point(int(x), int(y)) for x, y in coords))

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    @cached_property
    def coords(self) -> np.ndarray:
        """(n, 2) int64 coordinate array; only valid below INT64_SAFE_COORD."""
        return np.array([(p.x, p.y) for p in self.points], dtype=np.int64).reshape(-1, 2)

    @cached_property
    def max_abs_coord(self) -> int:
        if not self.points:
            return 0
        return max(max(abs(p.x), abs(p.y)) for p in self.points)


def sign_subtensor(ps: PointSet, ids: Sequence[int]) -> np.ndarray:
    """Orientation signs for all ordered triples of a subset of points.

    Returns an int8 tensor T with T[a, b, c] = sign of
    orientation_value(ps[ids[a]], ps[ids[b]], ps[ids[c]]); diagonal entries
    (repeated positions) are 0. Used to make same-type checks array lookups.
    """
    u = len(ids)
    out = np.zeros((u, u, u), dtype=np.int8)
    if u < 3:
        return out
    if ps.max_abs_coord < INT64_SAFE_COORD:
        sub = ps.coords[list(ids)]
        for a in range(u):
            v = sub - sub[a]
            cross = v[:, 0][:, None] * v[:, 1][None, :] - v[:, 1][:, None] * v[:, 0][None, :]
            out[a] = np.sign(cross).astype(np.int8)
        return out
    for a in range(u):
        pa = ps[ids[a]]
        for b in range(u):
            if b == a:
                continue
            pb = ps[ids[b]]
            for c in range(u):
                if c == a or c == b:
                    continue
                v = orientation_value(pa, pb, ps[ids[c]])
                out[a, b, c] = (v > 0) - (v < 0)
    return out


def segments_cross(a: tuple[Point, Point], b: tuple[Point, Point]) -> bool:
    """True iff the open segments a and b meet in exactly one interior point.

    Segments sharing an endpoint never cross; under general position the
    four orientation tests decide everything.
    """
    p, q = a
    r, s = b
    d1 = orientation_value(p, q, r)
    d2 = orientation_value(p, q, s)
    if d1 * d2 >= 0:
        return False
    d3 = orientation_value(r, s, p)
    d4 = orientation_value(r, s, q)
    return d3 * d4 < 0


@dataclass(frozen=True)
class OrderType:
    """Sign map over all ordered triples of point ids.

    Swapping any two arguments flips the sign; this holds by construction.
    """

    n: int
    signs: Mapping[tuple[int, int, int], OrientationSign]

    def __getitem__(self, triple: tuple[int, int, int]) -> OrientationSign:
        return self.signs[triple]

    def __len__(self) -> int:
        return len(self.signs)


def order_type(ps: PointSet) -> OrderType:
    """Complete orientation sign map of a point set, all n(n-1)(n-2) triples."""
    signs: dict[tuple[int, int, int], OrientationSign] = {}
    n = len(ps)
    for i, j, k in combinations(range(n), 3):
        s = orientation(ps[i], ps[j], ps[k])
        if s is OrientationSign.ZERO:
            raise CollinearError(i, j, k, (ps[i], ps[j], ps[k]))
        f = s.flipped()
        signs[(i, j, k)] = s
        signs[(j, k, i)] = s
        signs[(k, i, j)] = s
        signs[(j, i, k)] = f
        signs[(i, k, j)] = f
        signs[(k, j, i)] = f
    return OrderType(n=n, signs=signs)


def same_order_type(
    s: PointSet, t: PointSet, f: Sequence[int] | Mapping[int, int]
) -> bool:
    """True iff the bijection f (id -> id) preserves every triple sign."""
    if len(s) != len(t):
        raise ValueError(f"size mismatch: {len(s)} vs {len(t)}")
    n = len(s)
    image = [f[i] for i in range(n)]
    if sorted(image) != list(range(n)):
        raise ValueError("f is not a bijection onto the target ids")
    for i, j, k in combinations(range(n), 3):
        a = orientation_value(s[i], s[j], s[k])
        b = orientation_value(t[image[i]], t[image[j]], t[image[k]])
        if (a > 0) != (b > 0) or (a < 0) != (b < 0):
            return False
    return True
