"""Bundle construction: the pipeline that finds k edge bundles whose
bipartite edge sets pairwise cross completely.

A bundle is a pair (Y, Z) of disjoint vertex sets together with all Y-Z
edges. The pipeline: balance-partition the vertices, refine into a regular
box partition, pick a dense regular box, shrink its factors until they have
same-type transversals, build the abstract graph whose edges are the dense
factor pairs, search it for k pairwise-crossing edges, and read each such
edge off as a bundle. Same-type transversals make the crossing pattern of
one transversal representative binding for every choice of endpoints, and
the certificate module re-verifies all of it exhaustively before anything
is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import PointSet
from .graph import (
    GeometricGraph,
    bipartite_edges,
    crossing_set,
    density,
    induced_density,
)
from .regularity import (
    NoDenseRegularBoxError,
    box_density,
    random_balanced_partition,
    regular_box_partition,
    select_dense_regular_box,
    threshold_graph,
)
from .sametype import VertexTuplePartition, same_type_refine


class PipelineStageError(RuntimeError):
    """A pipeline stage failed; carries the stage name and attempt log."""

    def __init__(self, stage: str, detail: str, attempts: list[str] | None = None):
        self.stage = stage
        self.detail = detail
        self.attempts = attempts or []
        super().__init__(f"stage '{stage}' failed: {detail}")


@dataclass(frozen=True)
class Bundle:
    """Disjoint vertex sets Y, Z plus exactly the Y-Z edge indices."""

    Y: tuple[int, ...]
    Z: tuple[int, ...]
    edges: tuple[int, ...]
    size_floor: int

    def __post_init__(self) -> None:
        if set(self.Y) & set(self.Z):
            raise ValueError("Y and Z overlap")
        if self.size_floor != min(len(self.Y), len(self.Z)):
            raise ValueError("size_floor must be min(|Y|, |Z|)")


def make_bundle(g: GeometricGraph, y: Sequence[int], z: Sequence[int]) -> Bundle:
    y = tuple(sorted(set(int(v) for v in y)))
    z = tuple(sorted(set(int(v) for v in z)))
    return Bundle(
        Y=y,
        Z=z,
        edges=tuple(bipartite_edges(g, y, z)),
        size_floor=min(len(y), len(z)),
    )


def count_K22(g: GeometricGraph, y: Sequence[int], z: Sequence[int]) -> int:
    """Complete bipartite 2x2 subgraphs between y and z, counted via common
    neighborhoods: each z-pair contributes C(common, 2)."""
    ys = sorted(set(int(v) for v in y))
    zs = sorted(set(int(v) for v in z))
    if set(ys) & set(zs):
        raise ValueError("vertex sets overlap")
    ypos = {v: i for i, v in enumerate(ys)}
    masks = []
    for v in zs:
        m = 0
        for w in g.adjacency[v]:
            if w in ypos:
                m |= 1 << ypos[w]
        masks.append(m)
    total = 0
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            c = (masks[i] & masks[j]).bit_count()
            total += c * (c - 1) // 2
    return total


def noncrossing_pair_floor(g: GeometricGraph, bundle: Bundle) -> int:
    """Lower bound on disjoint non-crossing edge pairs inside the bundle.

    Every geometric 2x2 complete bipartite subgraph contains at least one
    non-crossing disjoint edge pair, and distinct subgraphs have distinct
    vertex sets, so the count of such subgraphs is a valid floor.
    """
    return count_K22(g, bundle.Y, bundle.Z)


def find_pairwise_crossing_edges(
    g: GeometricGraph, k: int, crossing=None
) -> list[int] | None:
    """First k-clique in the edge-crossing graph under index order, or None
    after exhaustive search.

    Pairwise-crossing edges are automatically vertex-disjoint, which is what
    makes the candidate sets shrink quickly.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    m = g.m
    if m < k:
        return None
    if crossing is None:
        crossing = crossing_set(g)
    neighbor = [0] * m
    for i, j in crossing.pairs:
        neighbor[i] |= 1 << j
        neighbor[j] |= 1 << i

    def extend(chosen: list[int], cand: int) -> list[int] | None:
        if len(chosen) == k:
            return chosen
        while cand:
            if len(chosen) + cand.bit_count() < k:
                return None
            low = cand & -cand
            e = low.bit_length() - 1
            cand ^= low
            found = extend(chosen + [e], cand & neighbor[e])
            if found is not None:
                return found
        return None

    return extend([], (1 << m) - 1)


@dataclass(frozen=True)
class BundleParams:
    """Knobs for the bundle pipeline; defaults suit desk-scale instances."""

    r_schedule: tuple[int, ...] | None = None  # default (2k, 4k, 8k), capped at n
    seed: int = 0
    attempts_per_r: int = 6
    partition_redraws: int = 32
    eps: Fraction | None = None  # default from the graph density
    exhaustive_cap: int = 24
    sample_budget: int = 2000
    max_splits: int = 20000


def default_epsilon(d: Fraction) -> Fraction:
    """min(1/8, d/(4-d) - d/4) rounded down to a dyadic rational."""
    gap = d / (4 - d) - d / 4
    raw = min(Fraction(1, 8), gap)
    scaled = (raw.numerator * 1024) // raw.denominator
    if scaled < 1:
        scaled = 1
    return Fraction(scaled, 1024)


def _attempt(g, k, r, eps, seed, params):
    d = density(g)
    delta = d / (4 - d)

    parts = None
    for draw in range(params.partition_redraws):
        cand = random_balanced_partition(g, r, seed * 1009 + draw)
        trimmed = [v for p in cand for v in p]
        d_trim = induced_density(g, trimmed)
        if box_density(g, cand) >= d_trim:
            parts = cand
            break
    if parts is None:
        raise PipelineStageError(
            "balanced_partition",
            f"no draw of {params.partition_redraws} reached the trimmed density",
        )

    partition = regular_box_partition(
        g,
        parts,
        eps,
        exhaustive_cap=params.exhaustive_cap,
        sample_budget=params.sample_budget,
        seed=seed,
        max_splits=params.max_splits,
    )
    if not partition.succeeded:
        raise PipelineStageError(
            "regular_box_partition",
            f"irregular mass {partition.irregular_mass} still above "
            f"{float(partition.epsilon * partition.tuple_count):.1f} after "
            f"{partition.splits} splits",
        )

    try:
        box = select_dense_regular_box(g, partition, d)
    except NoDenseRegularBoxError as exc:
        raise PipelineStageError("select_dense_regular_box", str(exc)) from exc

    try:
        refined = same_type_refine(VertexTuplePartition(g.vertices, box.factors))
    except RuntimeError as exc:
        raise PipelineStageError("same_type_refine", str(exc)) from exc
    factors = refined.partition.parts

    # Abstract dense-pair graph on one transversal point per factor; the
    # adjacency uses the unrefined factor densities, the representatives the
    # refined factors. Same-type transversals make the representative
    # crossing pattern binding for every endpoint choice.
    tg = threshold_graph(g, box, delta)
    reps = [f[0] for f in factors]
    rep_points = [g.vertices[v] for v in reps]
    transversal_graph = GeometricGraph(PointSet(tuple(rep_points)), tuple(tg.edges))

    found = find_pairwise_crossing_edges(transversal_graph, k)
    if found is None:
        raise PipelineStageError(
            "find_pairwise_crossing_edges",
            f"no {k} pairwise-crossing edges among the {len(tg.edges)} dense pairs",
        )

    bundles = []
    for e in found:
        i, j = transversal_graph.edges[e]
        bundle = make_bundle(g, factors[i], factors[j])
        if not bundle.edges:
            raise PipelineStageError(
                "build_bundles", f"degenerate bundle between factors {i} and {j}"
            )
        bundles.append(bundle)
    return bundles


def build_bundles(
    g: GeometricGraph,
    k: int,
    eps: Fraction | None = None,
    params: BundleParams | None = None,
) -> list[Bundle]:
    """Run the full bundle pipeline, escalating r and reseeding on failure.

    The returned bundles always pass the exhaustive certificate checks
    (sizes, edge mass, complete pairwise crossing, bounded internal
    crossings with positive slack); any stage failure across the whole
    schedule raises PipelineStageError naming the deepest failing stage.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    params = params or BundleParams()
    d = density(g)
    if d == 0:
        raise PipelineStageError("density", "graph has no edges")
    if eps is None:
        eps = params.eps if params.eps is not None else default_epsilon(d)
    eps = Fraction(eps)

    schedule = params.r_schedule
    if schedule is None:
        schedule = tuple(r for r in (2 * k, 4 * k, 8 * k) if r <= g.n) or (min(g.n, 2 * k),)

    attempts: list[str] = []
    last: PipelineStageError | None = None
    for r in schedule:
        if r < 2 or r > g.n:
            continue
        for t in range(params.attempts_per_r):
            seed = params.seed + 7919 * t + 104729 * r
            try:
                bundles = _attempt(g, k, r, eps, seed, params)
            except PipelineStageError as exc:
                attempts.append(f"r={r} try={t}: {exc.stage}: {exc.detail}")
                last = exc
                continue
            from .certificate import max_feasible_constants, verify_conditions

            try:
                c1, c2, c3 = max_feasible_constants(g, bundles)
            except ValueError as exc:
                attempts.append(f"r={r} try={t}: constants: {exc}")
                last = PipelineStageError("max_feasible_constants", str(exc), attempts)
                continue
            report = verify_conditions(g, bundles, c1, c2, c3)
            if not report.passed:
                failed = [c.name for c in report.checks if not c.passed]
                attempts.append(f"r={r} try={t}: verify: {failed}")
                last = PipelineStageError(
                    "verify_conditions", f"conditions failed: {failed}", attempts
                )
                continue
            return bundles
    if last is None:
        raise PipelineStageError("schedule", f"no usable r in {schedule}", attempts)
    raise PipelineStageError(last.stage, last.detail, attempts)
