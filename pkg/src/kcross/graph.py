"""Geometric graphs, exact densities, and crossing-pair enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable

import numpy as np

from .geometry import INT64_SAFE_COORD, PointSet, orientation_value


@dataclass(frozen=True)
class GeometricGraph:
    """A point set plus straight-segment edges given as id pairs.

    Edge endpoints are normalized to (min, max); edge order is preserved
    because edge indices identify edges everywhere downstream.
    """

    vertices: PointSet
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        norm = []
        seen: set[tuple[int, int]] = set()
        for idx, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"edge {idx} is a loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {idx} ({u},{v}) references a missing vertex")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge ({e[0]},{e[1]})")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    def segment(self, edge_idx: int):
        u, v = self.edges[edge_idx]
        return (self.vertices[u], self.vertices[v])


def density(g: GeometricGraph) -> Fraction:
    """|E| / C(n, 2), exact."""
    if g.n < 2:
        raise ValueError("density needs at least 2 vertices")
    return Fraction(g.m, comb(g.n, 2))


def induced_edge_count(g: GeometricGraph, ids: Iterable[int]) -> int:
    s = set(ids)
    return sum(1 for u, v in g.edges if u in s and v in s)


def induced_density(g: GeometricGraph, ids: Iterable[int]) -> Fraction:
    ids = set(ids)
    if len(ids) < 2:
        raise ValueError("induced density needs at least 2 vertices")
    return Fraction(induced_edge_count(g, ids), comb(len(ids), 2))


@dataclass(frozen=True)
class CrossingSet:
    """All unordered pairs of edge indices whose open segments cross."""

    pairs: frozenset[tuple[int, int]]
    count: int

    def __post_init__(self) -> None:
        if self.count != len(self.pairs):
            raise ValueError("count disagrees with the stored pairs")


def _crossing_pairs_vectorized(g: GeometricGraph) -> list[tuple[int, int]]:
    # Signs of every vertex against every edge's supporting line, then an
    # edge pair crosses iff each straddles the other's line. Shared
    # endpoints produce sign 0 and drop out automatically.
    coords = g.vertices.coords
    e = np.array(g.edges, dtype=np.int64)
    p, q = coords[e[:, 0]], coords[e[:, 1]]
    d = q - p
    cross = d[:, 0:1] * (coords[None, :, 1] - p[:, 1:2]) - d[:, 1:2] * (
        coords[None, :, 0] - p[:, 0:1]
    )
    s = np.sign(cross).astype(np.int8)
    straddle = s[:, e[:, 0]] * s[:, e[:, 1]]  # straddle[i, j]: ends of j vs line of i
    mat = (straddle < 0) & (straddle.T < 0)
    ii, jj = np.nonzero(np.triu(mat, k=1))
    return [(int(a), int(b)) for a, b in zip(ii, jj)]


def _crossing_pairs_exact(g: GeometricGraph) -> list[tuple[int, int]]:
    pts = g.vertices
    segs = [(pts[u], pts[v]) for u, v in g.edges]
    out = []
    for i in range(len(segs)):
        p, q = segs[i]
        for j in range(i + 1, len(segs)):
            r, t = segs[j]
            d1 = orientation_value(p, q, r)
            d2 = orientation_value(p, q, t)
            if d1 * d2 >= 0:
                continue
            d3 = orientation_value(r, t, p)
            d4 = orientation_value(r, t, q)
            if d3 * d4 < 0:
                out.append((i, j))
    return out


def crossing_set(g: GeometricGraph) -> CrossingSet:
    """Exact enumeration of all crossing edge pairs.

    Uses a precomputed (edge, vertex) orientation-sign matrix when the
    coordinates allow exact int64 arithmetic; otherwise falls back to
    unbounded Python integers. Both paths agree exactly.
    """
    if g.m < 2:
        return CrossingSet(pairs=frozenset(), count=0)
    if g.vertices.max_abs_coord < INT64_SAFE_COORD:
        pairs = _crossing_pairs_vectorized(g)
    else:
        pairs = _crossing_pairs_exact(g)
    return CrossingSet(pairs=frozenset(pairs), count=len(pairs))


def crossing_adjacency(g: GeometricGraph, crossing: CrossingSet) -> list[list[int]]:
    """Per-edge lists of crossing partners, each sorted ascending."""
    adj: list[list[int]] = [[] for _ in range(g.m)]
    for i, j in crossing.pairs:
        adj[i].append(j)
        adj[j].append(i)
    for lst in adj:
        lst.sort()
    return adj


def bipartite_edges(g: GeometricGraph, x: Iterable[int], y: Iterable[int]) -> list[int]:
    """Indices of edges with one endpoint in x and the other in y."""
    xs, ys = set(x), set(y)
    if xs & ys:
        raise ValueError(f"vertex sets overlap: {sorted(xs & ys)}")
    out = []
    for i, (u, v) in enumerate(g.edges):
        if (u in xs and v in ys) or (u in ys and v in xs):
            out.append(i)
    return out


@dataclass(frozen=True)
class PairDensity:
    """Edge count between two disjoint vertex sets, normalized exactly."""

    a_size: int
    b_size: int
    edge_count: int
    value: Fraction

    def __post_init__(self) -> None:
        if self.value != Fraction(self.edge_count, self.a_size * self.b_size):
            raise ValueError("stored value disagrees with edge_count/(a_size*b_size)")


def count_edges_between(g: GeometricGraph, a: Iterable[int], b: Iterable[int]) -> int:
    """|E(A,B)| for disjoint sets; picks membership tests or an edge scan,
    whichever is cheaper."""
    a, b = set(a), set(b)
    if len(a) * len(b) <= g.m:
        adj = g.adjacency
        return sum(1 for u in a for w in b if w in adj[u])
    return sum(1 for u, v in g.edges if (u in a and v in b) or (u in b and v in a))


def pair_density(g: GeometricGraph, a: Iterable[int], b: Iterable[int]) -> PairDensity:
    """|E(A,B)| / (|A| |B|) as an exact rational."""
    a, b = set(a), set(b)
    if not a or not b:
        raise ValueError("pair density needs both sets nonempty")
    if a & b:
        raise ValueError(f"vertex sets overlap: {sorted(a & b)}")
    cnt = count_edges_between(g, a, b)
    return PairDensity(
        a_size=len(a), b_size=len(b), edge_count=cnt, value=Fraction(cnt, len(a) * len(b))
    )


def complete_graph(ps: PointSet) -> GeometricGraph:
    n = len(ps)
    return GeometricGraph(ps, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def convex_polygon_points(n: int, radius: int = 2**19) -> PointSet:
    """n integer points in convex position (regular polygon, validated).

    Falls back to a parabolic arc, which is convex and collinearity-free by
    construction, if rounding ever breaks general position.
    """
    import math

    for attempt in range(8):
        pts = []
        ok = True
        for i in range(n):
            ang = 2 * math.pi * i / n + attempt * 0.013
            pts.append((round(radius * math.cos(ang)), round(radius * math.sin(ang))))
        try:
            ps = PointSet.from_coords(pts)
        except ValueError:
            ok = False
        if ok:
            vals = [
                orientation_value(ps[i], ps[(i + 1) % n], ps[(i + 2) % n]) for i in range(n)
            ]
            if all(v > 0 for v in vals) or all(v < 0 for v in vals):
                return ps
    half = n // 2
    return PointSet.from_coords([(t, t * t) for t in range(-half, n - half)])
