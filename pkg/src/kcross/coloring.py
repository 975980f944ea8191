"""Edge k-colorings and exact same-color crossing statistics.

Three ways to color: uniform random (the probabilistic baseline), a greedy
conditional-expectation coloring whose same-color crossing count provably
stays at or below crs(G)/k, and the bundle coloring that pre-assigns one
color per bundle before greedily finishing the rest.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import CrossingSet, GeometricGraph, crossing_adjacency, crossing_set


@dataclass(frozen=True)
class EdgeColoring:
    """Total map edge index -> color in {1..k}."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        for i, c in enumerate(self.colors):
            if not 1 <= c <= self.k:
                raise ValueError(f"edge {i} has color {c} outside 1..{self.k}")


@dataclass(frozen=True)
class ColoringStats:
    """Monochromatic / heterochromatic split of the crossing pairs.

    ratio is mono/total; a graph without crossings is flagged vacuous and
    reported with ratio 0.
    """

    mono: int
    hetero: int
    total: int
    ratio: Fraction
    vacuous: bool

    def __post_init__(self) -> None:
        if self.mono + self.hetero != self.total:
            raise ValueError("mono + hetero must equal total")
        expect = Fraction(0) if self.total == 0 else Fraction(self.mono, self.total)
        if self.ratio != expect:
            raise ValueError("ratio disagrees with mono/total")


def random_coloring(g: GeometricGraph, k: int, seed: int) -> EdgeColoring:
    """Each edge gets an independent uniform color; reproducible from seed."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = random.Random(seed)
    return EdgeColoring(k=k, colors=tuple(rng.randint(1, k) for _ in range(g.m)))


def _default_order(g: GeometricGraph, adj: list[list[int]], within=None) -> list[int]:
    # Descending crossing degree, edge index as tie-break.
    idxs = range(g.m) if within is None else within
    return sorted(idxs, key=lambda e: (-len(adj[e]), e))


def derandomized_coloring(
    g: GeometricGraph,
    k: int,
    edge_order: Sequence[int] | None = None,
    crossing: CrossingSet | None = None,
) -> EdgeColoring:
    """Greedy conditional-expectation coloring with mono <= crs(G)/k.

    Edges are processed in edge_order (default: descending crossing degree);
    each takes the color minimizing conflicts with already-colored crossing
    partners, smallest color index on ties. Each crossing pair is charged
    when its second edge is colored and the minimum over k colors is at most
    the average, which gives the crs(G)/k guarantee for any order.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if crossing is None:
        crossing = crossing_set(g)
    adj = crossing_adjacency(g, crossing)
    if edge_order is None:
        order = _default_order(g, adj)
    else:
        order = list(edge_order)
        if sorted(order) != list(range(g.m)):
            raise ValueError("edge_order is not a permutation of the edge indices")

    colors = [0] * g.m
    conflicts = [[0] * k for _ in range(g.m)]
    for e in order:
        row = conflicts[e]
        best = min(range(k), key=lambda c: (row[c], c))
        colors[e] = best + 1
        for f in adj[e]:
            if colors[f] == 0:
                conflicts[f][best] += 1
    return EdgeColoring(k=k, colors=tuple(colors))


def bundle_coloring(
    g: GeometricGraph,
    bundles: Sequence,
    edge_order: Sequence[int] | None = None,
    crossing: CrossingSet | None = None,
) -> EdgeColoring:
    """Color all edges of bundle i with color i, then greedily finish.

    The leftover edges are colored by conditional expectations counting
    conflicts against everything already colored (bundle edges included),
    so the leftover pairs contribute at most (|C1| + |C2|)/k same-color
    crossings on top of the bundle-internal ones.
    """
    k = len(bundles)
    if k < 2:
        raise ValueError(f"need at least 2 bundles, got {k}")
    if crossing is None:
        crossing = crossing_set(g)
    adj = crossing_adjacency(g, crossing)

    colors = [0] * g.m
    for i, b in enumerate(bundles):
        for e in b.edges:
            if colors[e] != 0:
                raise ValueError(
                    f"edge {e} ({g.edges[e][0]},{g.edges[e][1]}) lies in two bundles"
                )
            colors[e] = i + 1

    rest = [e for e in range(g.m) if colors[e] == 0]
    if edge_order is None:
        order = _default_order(g, adj, within=rest)
    else:
        order = list(edge_order)
        if sorted(order) != sorted(rest):
            raise ValueError("edge_order is not a permutation of the uncolored edges")

    conflicts = [[0] * k for _ in range(g.m)]
    for e in rest:
        for f in adj[e]:
            if colors[f] != 0:
                conflicts[e][colors[f] - 1] += 1
    for e in order:
        row = conflicts[e]
        best = min(range(k), key=lambda c: (row[c], c))
        colors[e] = best + 1
        for f in adj[e]:
            if colors[f] == 0:
                conflicts[f][best] += 1
    return EdgeColoring(k=k, colors=tuple(colors))


def coloring_stats(
    g: GeometricGraph, coloring: EdgeColoring, crossing: CrossingSet | None = None
) -> ColoringStats:
    """Exact mono/hetero counts over all crossing pairs."""
    if len(coloring.colors) != g.m:
        raise ValueError(
            f"coloring covers {len(coloring.colors)} edges, graph has {g.m}"
        )
    if crossing is None:
        crossing = crossing_set(g)
    c = coloring.colors
    mono = sum(1 for i, j in crossing.pairs if c[i] == c[j])
    total = crossing.count
    return ColoringStats(
        mono=mono,
        hetero=total - mono,
        total=total,
        ratio=Fraction(mono, total) if total else Fraction(0),
        vacuous=total == 0,
    )
