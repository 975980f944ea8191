"""Exact certificates: verified bundle conditions and the guaranteed bound.

A certificate packages the measured constants of a bundle family (side
sizes, edge masses, internal crossing slack) together with the exact
two-stage margin they imply. Every inequality is checked with rational
arithmetic, and the crossing condition (every edge of one bundle crosses
every edge of every other) is verified exhaustively, pair by pair. The
guaranteed bound is 1/k - margin; the coloring produced alongside always
achieves a same-color crossing ratio at or below it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .bundles import Bundle, BundleParams, PipelineStageError, build_bundles
from .coloring import EdgeColoring, bundle_coloring, coloring_stats
from .geometry import segments_cross
from .graph import GeometricGraph, crossing_set


class VacuousInstanceError(ValueError):
    """The instance has no crossing pair, so the ratio is undefined."""


@dataclass(frozen=True)
class Certificate:
    """Measured constants plus the exact guaranteed crossing-ratio bound.

    side_fraction: every bundle side holds at least side_fraction * n points.
    edge_fraction: every bundle holds at least edge_fraction * n^2 edges.
    crossing_slack: internal crossings per bundle stay at most
        (edge_fraction^2/2 - crossing_slack) * n^4.
    bundle_crossings: the exact internal crossing-pair count per bundle.
    bundled_crossings / rest_crossings / mixed_crossings: crossing pairs
        with both, neither, or exactly one edge inside the bundle edges.
    core_margin: margin below 1/k achieved inside the bundled subgraph.
    margin: overall margin after diluting by the non-bundled crossings.
    ratio_bound: 1/k - margin; achieved_ratio must not exceed it.
    """

    k: int
    side_fraction: Fraction
    edge_fraction: Fraction
    crossing_slack: Fraction
    bundle_crossings: tuple[int, ...]
    bundled_crossings: int
    rest_crossings: int
    mixed_crossings: int
    core_margin: Fraction
    margin: Fraction
    ratio_bound: Fraction
    achieved_ratio: Fraction

    def __post_init__(self) -> None:
        k = self.k
        if k < 2:
            raise ValueError(f"k must be >= 2, got {k}")
        if len(self.bundle_crossings) != k:
            raise ValueError("need one internal crossing count per bundle")
        c2, c3 = self.edge_fraction, self.crossing_slack
        if not 0 < c3 <= c2 * c2 / 2:
            raise ValueError(
                f"crossing_slack {c3} outside (0, edge_fraction^2/2 = {c2 * c2 / 2}]"
            )
        expect_core = (c3 - c3 / k) / (k * c2 * c2 / 2 - c3)
        if self.core_margin != expect_core:
            raise ValueError("core_margin disagrees with its defining formula")
        if self.core_margin <= 0:
            raise ValueError("core_margin must be positive")
        denom = self.bundled_crossings + self.rest_crossings + self.mixed_crossings
        expect_margin = self.core_margin * Fraction(self.bundled_crossings, denom)
        if self.margin != expect_margin:
            raise ValueError("margin disagrees with its defining formula")
        if self.margin <= 0:
            raise ValueError("margin must be positive")
        if self.ratio_bound != Fraction(1, k) - self.margin:
            raise ValueError("ratio_bound must equal 1/k - margin")
        if self.achieved_ratio > self.ratio_bound:
            raise ValueError(
                f"achieved ratio {self.achieved_ratio} exceeds the bound {self.ratio_bound}"
            )


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    detail: str
    witness: tuple | None = None


@dataclass(frozen=True)
class ConditionReport:
    checks: tuple[ConditionCheck, ...]
    passed: bool
    internal_crossings: tuple[int, ...]


def internal_crossing_count(g: GeometricGraph, bundle: Bundle) -> int:
    """Exact number of crossing pairs among the bundle's own edges."""
    segs = [g.segment(e) for e in bundle.edges]
    return sum(
        1
        for i in range(len(segs))
        for j in range(i + 1, len(segs))
        if segments_cross(segs[i], segs[j])
    )


def _noncrossing_witness(g: GeometricGraph, bi: Bundle, bj: Bundle):
    for e in bi.edges:
        se = g.segment(e)
        for f in bj.edges:
            if not segments_cross(se, g.segment(f)):
                return (e, f)
    return None


def verify_conditions(
    g: GeometricGraph,
    bundles: Sequence[Bundle],
    side_fraction: Fraction,
    edge_fraction: Fraction,
    crossing_slack: Fraction,
) -> ConditionReport:
    """Check the four bundle conditions exactly, reporting each separately.

    (a) every side has at least side_fraction * n points; (b) every bundle
    has at least edge_fraction * n^2 edges; (c) every edge of one bundle
    crosses every edge of every other, checked exhaustively; (d) internal
    crossings stay within the slack budget. Bundles sharing an edge are a
    structural error, not a failed condition.
    """
    k = len(bundles)
    if k < 2:
        raise ValueError(f"need at least 2 bundles, got {k}")
    owned: dict[int, int] = {}
    for i, b in enumerate(bundles):
        for e in b.edges:
            if e in owned:
                raise ValueError(f"edge {e} belongs to bundles {owned[e]} and {i}")
            owned[e] = i

    n = g.n
    c1, c2, c3 = Fraction(side_fraction), Fraction(edge_fraction), Fraction(crossing_slack)
    checks: list[ConditionCheck] = []

    small = [
        (i, side, len(ids))
        for i, b in enumerate(bundles)
        for side, ids in (("Y", b.Y), ("Z", b.Z))
        if len(ids) < c1 * n
    ]
    checks.append(
        ConditionCheck(
            name="side_size",
            passed=not small,
            detail=f"every side needs >= {c1} * {n} = {float(c1 * n):.3f} points"
            + (f"; first failure: bundle {small[0][0]} side {small[0][1]}" if small else ""),
            witness=small[0] if small else None,
        )
    )

    thin = [(i, len(b.edges)) for i, b in enumerate(bundles) if len(b.edges) < c2 * n * n]
    checks.append(
        ConditionCheck(
            name="edge_mass",
            passed=not thin,
            detail=f"every bundle needs >= {c2} * {n}^2 = {float(c2 * n * n):.3f} edges"
            + (f"; first failure: bundle {thin[0][0]} with {thin[0][1]}" if thin else ""),
            witness=thin[0] if thin else None,
        )
    )

    cross_witness = None
    for i, j in combinations(range(k), 2):
        w = _noncrossing_witness(g, bundles[i], bundles[j])
        if w is not None:
            cross_witness = (i, j, w[0], w[1])
            break
    checks.append(
        ConditionCheck(
            name="cross_pattern",
            passed=cross_witness is None,
            detail="every inter-bundle edge pair crosses (exhaustive)"
            if cross_witness is None
            else f"edges {cross_witness[2]} (bundle {cross_witness[0]}) and "
            f"{cross_witness[3]} (bundle {cross_witness[1]}) do not cross",
            witness=cross_witness,
        )
    )

    internal = tuple(internal_crossing_count(g, b) for b in bundles)
    budget = (c2 * c2 / 2 - c3) * n**4
    heavy = [(i, s) for i, s in enumerate(internal) if s > budget]
    checks.append(
        ConditionCheck(
            name="internal_crossings",
            passed=not heavy,
            detail=f"internal crossings per bundle must stay <= {float(budget):.3f}"
            + (f"; first failure: bundle {heavy[0][0]} with {heavy[0][1]}" if heavy else ""),
            witness=heavy[0] if heavy else None,
        )
    )

    return ConditionReport(
        checks=tuple(checks),
        passed=all(c.passed for c in checks),
        internal_crossings=internal,
    )


def max_feasible_constants(
    g: GeometricGraph, bundles: Sequence[Bundle]
) -> tuple[Fraction, Fraction, Fraction]:
    """Largest constants the bundle family supports, measured exactly.

    side_fraction = min side size / n, edge_fraction = min edge count / n^2,
    crossing_slack = edge_fraction^2/2 - max internal crossings / n^4.
    Raises when the slack is not positive (the family has no usable gap).
    """
    if len(bundles) < 2:
        raise ValueError(f"need at least 2 bundles, got {len(bundles)}")
    n = g.n
    c1 = min(Fraction(min(len(b.Y), len(b.Z)), n) for b in bundles)
    c2 = min(Fraction(len(b.edges), n * n) for b in bundles)
    worst = max(internal_crossing_count(g, b) for b in bundles)
    c3 = c2 * c2 / 2 - Fraction(worst, n**4)
    if c3 <= 0:
        raise ValueError(
            f"no positive crossing slack: worst bundle has {worst} internal "
            f"crossings but the budget is {float(c2 * c2 / 2 * n**4):.3f}"
        )
    return c1, c2, c3


def bound_from_certificate(cert: Certificate) -> Fraction:
    """Recompute the bound from the primitive fields and cross-check the
    intermediate core inequality before returning 1/k - margin."""
    k, c2, c3 = cert.k, cert.edge_fraction, cert.crossing_slack
    if not 0 < c3 <= c2 * c2 / 2:
        raise ValueError(f"crossing_slack {c3} outside (0, {c2 * c2 / 2}]")
    core = (c3 - c3 / k) / (k * c2 * c2 / 2 - c3)
    core_ratio_bound = (c2 * c2 / 2 - c3) / (k * (c2 * c2 / 2 - c3 / k))
    if core_ratio_bound != Fraction(1, k) - core:
        raise ValueError("core bound identity violated")
    denom = cert.bundled_crossings + cert.rest_crossings + cert.mixed_crossings
    margin = core * Fraction(cert.bundled_crossings, denom)
    bound = Fraction(1, k) - margin
    if bound != cert.ratio_bound:
        raise ValueError(f"stored bound {cert.ratio_bound} disagrees with {bound}")
    return bound


def end_to_end(
    g: GeometricGraph,
    k: int,
    eps: Fraction | None = None,
    params: BundleParams | None = None,
) -> tuple[EdgeColoring, Certificate]:
    """Full pipeline: bundles, constants, verification, coloring, certificate.

    The returned coloring's same-color crossing ratio is exactly measured
    and certified to stay at or below 1/k - margin with margin > 0.
    """
    crossing = crossing_set(g)
    if crossing.count == 0:
        raise VacuousInstanceError("vacuous instance: no two edges cross")

    bundles = build_bundles(g, k, eps=eps, params=params)
    c1, c2, c3 = max_feasible_constants(g, bundles)
    report = verify_conditions(g, bundles, c1, c2, c3)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise PipelineStageError("verify_conditions", f"conditions failed: {failed}")

    coloring = bundle_coloring(g, bundles, crossing=crossing)
    stats = coloring_stats(g, coloring, crossing=crossing)

    bundled_edges = {e for b in bundles for e in b.edges}
    bundled = rest = mixed = 0
    for i, j in crossing.pairs:
        inside = (i in bundled_edges) + (j in bundled_edges)
        if inside == 2:
            bundled += 1
        elif inside == 0:
            rest += 1
        else:
            mixed += 1

    core = (c3 - c3 / k) / (k * c2 * c2 / 2 - c3)
    margin = core * Fraction(bundled, bundled + rest + mixed)
    bound = Fraction(1, k) - margin
    if stats.ratio > Fraction(1, k):
        raise AssertionError("greedy tail exceeded 1/k, which cannot happen")

    cert = Certificate(
        k=k,
        side_fraction=c1,
        edge_fraction=c2,
        crossing_slack=c3,
        bundle_crossings=report.internal_crossings,
        bundled_crossings=bundled,
        rest_crossings=rest,
        mixed_crossings=mixed,
        core_margin=core,
        margin=margin,
        ratio_bound=bound,
        achieved_ratio=stats.ratio,
    )
    return coloring, cert
