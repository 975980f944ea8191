"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Every numeric claim is checked exactly (rationals) unless the
criterion itself is statistical, in which case the stated standard-error
tolerance is used.
"""

import random
import time
from fractions import Fraction
from itertools import combinations
from math import comb

from kcross.bundles import (
    count_K22,
    find_pairwise_crossing_edges,
    make_bundle,
    noncrossing_pair_floor,
)
from kcross.certificate import end_to_end
from kcross.coloring import coloring_stats, derandomized_coloring, random_coloring
from kcross.generate import GeneratorSpec, generate
from kcross.geometry import PointSet, segments_cross
from kcross.graph import (
    GeometricGraph,
    complete_graph,
    convex_polygon_points,
    crossing_set,
    density,
    induced_density,
)
from kcross.regularity import (
    Regularity,
    box_density,
    epsilon_regular_pair,
    random_balanced_partition,
    regular_box_partition,
)
from kcross.sametype import VertexTuplePartition, same_type_check, same_type_refine

from oracles import (
    box_density_tuple_oracle,
    crossing_count_oracle,
    mono_count_oracle,
    pairwise_crossing_oracle,
    regular_pair_literal,
    same_type_oracle,
)


def report(num, text):
    print(f"ACCEPTANCE {num}: PASS - {text}")


def test_criterion_1_derandomized_guarantee():
    start = time.perf_counter()
    rng = random.Random(20260809)
    instances = 0
    while instances < 500:
        n = rng.randrange(6, 41)
        d = Fraction(rng.randrange(20, 101), 100)
        k = (2, 3, 4)[instances % 3]
        g = generate(GeneratorSpec(kind="uniform-square", n=n, density=d, seed=instances))
        cs = crossing_set(g)
        stats = coloring_stats(g, derandomized_coloring(g, k, crossing=cs), crossing=cs)
        assert stats.mono <= Fraction(cs.count, k), (n, d, k)
        instances += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.1f}s, budget 60s"
    report(1, f"500 instances, mono <= crs/k exactly, zero violations ({elapsed:.1f}s)")


def test_criterion_2_theorem_at_desk_scale():
    cases = []
    for n in (16, 20, 24):
        for k in (2, 3):
            cases.append((f"convex K{n}", complete_graph(convex_polygon_points(n)), k))
    for k in (2, 3):
        g = generate(GeneratorSpec(kind="uniform-square", n=30, density=Fraction(3, 4), seed=7))
        assert density(g) >= Fraction(3, 4)
        cases.append(("random n=30 d>=3/4", g, k))

    worst = 0.0
    for name, g, k in cases:
        start = time.perf_counter()
        coloring, cert = end_to_end(g, k)
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        assert elapsed < 120, f"{name} k={k} took {elapsed:.1f}s, budget 120s"
        assert cert.margin > 0
        assert cert.achieved_ratio <= cert.ratio_bound
        assert cert.ratio_bound == Fraction(1, k) - cert.margin
        # independent brute-force recount of the achieved ratio
        mono = mono_count_oracle(g, coloring.colors)
        total = crossing_count_oracle(g)
        assert cert.achieved_ratio == Fraction(mono, total), name
    report(
        2,
        f"{len(cases)} end-to-end runs, margin > 0 and recounted ratio <= 1/k - margin "
        f"(worst instance {worst:.1f}s)",
    )


def test_criterion_3_crossing_oracle():
    for n in range(4, 13):
        g = complete_graph(convex_polygon_points(n))
        assert crossing_set(g).count == comb(n, 4)
    rng = random.Random(5)
    for trial in range(100):
        n = rng.randrange(6, 15)
        d = Fraction(rng.randrange(25, 101), 100)
        g = generate(GeneratorSpec(kind="uniform-square", n=n, density=d, seed=trial + 1000))
        assert crossing_set(g).count == crossing_count_oracle(g)
    report(3, "convex K_n counts equal C(n,4) for n<=12; 100 random instances match the O(m^2) oracle")


def test_criterion_4_k22_geometry():
    rng = random.Random(99)
    checked = 0
    while checked < 10_000:
        coords = set()
        while len(coords) < 4:
            coords.add((rng.randrange(2000), rng.randrange(2000)))
        try:
            ps = PointSet.from_coords(sorted(coords))
        except ValueError:
            continue
        first = segments_cross((ps[0], ps[2]), (ps[1], ps[3]))
        second = segments_cross((ps[0], ps[3]), (ps[1], ps[2]))
        assert not (first and second), sorted(coords)
        checked += 1

    floors_checked = 0
    for seed in range(12):
        g = generate(GeneratorSpec(kind="uniform-square", n=14, density=Fraction(3, 4), seed=seed))
        ys = list(range(0, 5))
        zs = list(range(5, 10))
        bundle = make_bundle(g, ys, zs)
        floor = noncrossing_pair_floor(g, bundle)
        assert floor == count_K22(g, ys, zs)
        ends = [g.edges[e] for e in bundle.edges]
        segs = [g.segment(e) for e in bundle.edges]
        actual = sum(
            1
            for i in range(len(segs))
            for j in range(i + 1, len(segs))
            if not (set(ends[i]) & set(ends[j])) and not segments_cross(segs[i], segs[j])
        )
        assert actual >= floor
        floors_checked += 1
    report(
        4,
        f"10^4 geometric 2x2 instances, both disjoint pairs never cross; "
        f"floor <= actual on {floors_checked} bundles",
    )


def test_criterion_5_partition_identities():
    rng = random.Random(17)
    for trial in range(100):
        n = 20  # allows r = 4 factors of size up to 5
        d = Fraction(rng.randrange(20, 95), 100)
        g = generate(GeneratorSpec(kind="uniform-square", n=n, density=d, seed=trial))
        r = rng.choice([2, 3, 4])
        sizes = [rng.randrange(1, 6) for _ in range(r)]
        ids = rng.sample(range(n), sum(sizes))
        factors, pos = [], 0
        for s in sizes:
            factors.append(ids[pos : pos + s])
            pos += s
        assert box_density(g, factors) == box_density_tuple_oracle(g, factors)

    g = generate(GeneratorSpec(kind="uniform-square", n=24, density=Fraction(2, 3), seed=3))
    d = density(g)
    draws = 10_000
    total = 0.0
    total_sq = 0.0
    for s in range(draws):
        val = float(box_density(g, random_balanced_partition(g, 4, s)))
        total += val
        total_sq += val * val
    mean = total / draws
    var = (total_sq - draws * mean * mean) / (draws - 1)
    se = (var / draws) ** 0.5
    assert abs(mean - float(d)) <= 3 * se, (mean, float(d), se)

    for seed in range(30):
        n = 10 + seed
        g = generate(GeneratorSpec(kind="uniform-square", n=n, density=Fraction(1, 2), seed=seed))
        for r in (3, 4, 7):
            if r > n:
                continue
            parts = random_balanced_partition(g, r, seed)
            kept = [v for p in parts for v in p]
            assert induced_density(g, kept) >= density(g)
    report(
        5,
        f"pair-density identity exact on 100 boxes; Monte-Carlo mean {mean:.4f} within "
        f"3 SE of d(G) = {float(d):.4f}; trimming never lowered the density",
    )


def test_criterion_6_regularity():
    rng = random.Random(31)
    pairs = [(2, 2), (3, 2), (3, 3), (4, 3), (4, 4), (5, 4), (5, 5), (6, 5),
             (6, 6), (7, 5), (7, 7), (8, 6), (8, 8), (9, 7), (10, 6), (12, 4)]
    instances = 0
    for na, nb in pairs:
        assert na + nb <= 16
        n = na + nb
        d = Fraction(rng.randrange(20, 95), 100)
        g = generate(GeneratorSpec(kind="uniform-square", n=n, density=d, seed=instances))
        a, b = list(range(na)), list(range(na, n))
        eps = Fraction(rng.randrange(1, 10), 16)
        chk = epsilon_regular_pair(g, a, b, eps)
        assert chk.exhaustive
        ok, witness = regular_pair_literal(g, a, b, eps)
        assert (chk.verdict is Regularity.REGULAR) == ok, (na, nb, eps)
        instances += 1

    # planted irregular instance: half of A joined to all of B, r=2, m=12
    n = 36
    ps = convex_polygon_points(n)
    a = list(range(12))
    b = list(range(12, 24))
    edges = tuple((x, y) for x in a[:6] for y in b)
    g = GeometricGraph(ps, edges)
    eps = Fraction(1, 4)
    partition = regular_box_partition(g, (a, b), eps)
    assert partition.succeeded
    assert partition.irregular_mass <= eps * 144
    report(
        6,
        f"{instances} exhaustive pair verdicts match the literal definition; planted "
        f"instance ends with irregular mass {partition.irregular_mass} <= {float(eps * 144):.0f}",
    )


def test_criterion_7_same_type():
    rng = random.Random(42)
    for seed in range(50):
        seen = set()
        groups = []
        for _ in range(4):
            grp = []
            while len(grp) < 12:
                c = (rng.randrange(3000), rng.randrange(3000))
                if c not in seen:
                    seen.add(c)
                    grp.append(c)
            groups.append(grp)
        coords = [c for grp in groups for c in grp]
        try:
            ps = PointSet.from_coords(coords)
        except ValueError:
            continue
        parts = tuple(tuple(range(i * 12, (i + 1) * 12)) for i in range(4))
        res = same_type_refine(VertexTuplePartition(ps, parts))
        assert same_type_check(res.partition).ok, seed
        assert all(len(p) >= 1 for p in res.partition.parts)

    agreements = 0
    for trial in range(40):
        t = rng.choice([3, 4])
        seen = set()
        groups = []
        for _ in range(t):
            grp = []
            while len(grp) < rng.choice([2, 3]):
                c = (rng.randrange(80), rng.randrange(80))
                if c not in seen:
                    seen.add(c)
                    grp.append(c)
            groups.append(grp)
        coords = [c for grp in groups for c in grp]
        try:
            ps = PointSet.from_coords(coords)
        except ValueError:
            continue
        parts, pos = [], 0
        for grp in groups:
            parts.append(tuple(range(pos, pos + len(grp))))
            pos += len(grp)
        got = same_type_check(VertexTuplePartition(ps, tuple(parts))).ok
        assert got == same_type_oracle(ps, parts)
        agreements += 1
    report(
        7,
        f"refinement certified on 50 seeds (t=4, parts of 12); checker matches the "
        f"transversal brute force on {agreements} small instances",
    )


def test_criterion_8_pairwise_crossing_search():
    for k in (2, 3, 4, 5):
        g = complete_graph(convex_polygon_points(2 * k))
        found = find_pairwise_crossing_edges(g, k)
        assert found is not None and len(found) == k
        segs = [g.segment(e) for e in found]
        for i, j in combinations(range(k), 2):
            assert segments_cross(segs[i], segs[j])

    rng = random.Random(8)
    checked = not_found_seen = 0
    for trial in range(40):
        n = rng.randrange(8, 12)
        m_target = rng.randrange(6, 21)
        g = generate(
            GeneratorSpec(
                kind="uniform-square",
                n=n,
                density=Fraction(m_target, comb(n, 2)),
                seed=trial + 500,
            )
        )
        assert g.m <= 20
        for k in (2, 3, 4):
            got = find_pairwise_crossing_edges(g, k)
            want = pairwise_crossing_oracle(g, k)
            assert (got is None) == (want is None), (trial, k)
            checked += 1
            if got is None:
                not_found_seen += 1
    assert not_found_seen > 0
    report(
        8,
        f"convex K_2k searches verified for k<=5; {checked} oracle comparisons with "
        f"{not_found_seen} certified NotFound outcomes",
    )


def test_criterion_9_baseline_statistics():
    g = complete_graph(convex_polygon_points(10))
    cs = crossing_set(g)
    assert cs.count == comb(10, 4)
    draws = 10_000
    total = 0.0
    total_sq = 0.0
    for seed in range(draws):
        stats = coloring_stats(g, random_coloring(g, 2, seed), crossing=cs)
        val = stats.mono / stats.total
        total += val
        total_sq += val * val
    mean = total / draws
    var = (total_sq - draws * mean * mean) / (draws - 1)
    se = (var / draws) ** 0.5
    assert abs(mean - 0.5) <= 3 * se, (mean, se)
    report(
        9,
        f"10^4 random 2-colorings of convex K10: mean mono/crs = {mean:.5f} "
        f"within 3 SE ({se:.5f}) of 1/2",
    )
