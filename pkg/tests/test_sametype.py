import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from kcross.geometry import PointSet, orientation_value
from kcross.sametype import (
    VertexTuplePartition,
    same_type_check,
    same_type_refine,
)

from oracles import same_type_oracle


def partition_from_groups(groups):
    coords = [c for grp in groups for c in grp]
    ps = PointSet.from_coords(coords)
    parts = []
    pos = 0
    for grp in groups:
        parts.append(tuple(range(pos, pos + len(grp))))
        pos += len(grp)
    return VertexTuplePartition(ps, tuple(parts))


def random_cluster_groups(rng, t, size, spread=400, sep=10_000):
    # cluster centers well apart, points jittered inside; retried until the
    # union is in general position
    while True:
        centers = [
            (rng.randrange(sep, 8 * sep), rng.randrange(sep, 8 * sep)) for _ in range(t)
        ]
        groups = [
            [
                (cx + rng.randrange(-spread, spread), cy + rng.randrange(-spread, spread))
                for _ in range(size)
            ]
            for cx, cy in centers
        ]
        try:
            return partition_from_groups(groups)
        except ValueError:
            continue


def random_square_groups(rng, t, size, box=1000):
    while True:
        seen = set()
        groups = []
        for _ in range(t):
            grp = []
            while len(grp) < size:
                c = (rng.randrange(box), rng.randrange(box))
                if c not in seen:
                    seen.add(c)
                    grp.append(c)
            groups.append(grp)
        try:
            return partition_from_groups(groups)
        except ValueError:
            continue


class TestSameTypeCheck:
    def test_three_singletons(self):
        p = partition_from_groups([[(0, 0)], [(10, 0)], [(5, 7)]])
        assert same_type_check(p).ok

    def test_split_cluster_fails_with_witness(self):
        p = partition_from_groups([[(0, 0)], [(10, 0)], [(5, 1), (5, -1)]])
        res = same_type_check(p)
        assert not res.ok
        w = res.witness
        assert w.part_triple == (0, 1, 2)
        s1 = orientation_value(*(p.points[i] for i in w.first))
        s2 = orientation_value(*(p.points[i] for i in w.second))
        assert (s1 > 0) != (s2 > 0)

    def test_separated_clusters_pass(self):
        # tight clusters (radius <= 4) around well-separated centers; the
        # concrete coordinates are pre-validated for general position
        groups = [
            [(-4, -2), (-2, -3), (2, 3), (0, -2), (1, 4)],
            [(997, 1), (1002, -1), (996, 2), (1003, 3), (1001, 4)],
            [(497, 1004), (504, 1003), (502, 1003), (498, 1002), (502, 1004)],
        ]
        p = partition_from_groups(groups)
        assert same_type_check(p).ok

    def test_fewer_than_three_parts_vacuous(self):
        p = partition_from_groups([[(0, 0), (3, 1)], [(10, 0), (12, 5)]])
        assert same_type_check(p).ok

    def test_agrees_with_transversal_oracle(self):
        rng = random.Random(5)
        agree_true = agree_false = 0
        for trial in range(40):
            t = rng.choice([3, 4])
            size = rng.choice([2, 3])
            if trial % 2:
                p = random_square_groups(rng, t, size, box=60)
            else:
                p = random_cluster_groups(rng, t, size)
            got = same_type_check(p).ok
            want = same_type_oracle(p.points, p.parts)
            assert got == want
            agree_true += got
            agree_false += not got
        assert agree_true and agree_false  # both outcomes exercised

    def test_true_means_transversal_pairs_share_order_type(self):
        from kcross.geometry import same_order_type

        rng = random.Random(6)
        checked = 0
        while checked < 5:
            p = random_cluster_groups(rng, 4, 3)
            if not same_type_check(p).ok:
                continue
            checked += 1
            transversals = list(product(*p.parts))[:12]
            for ta, tb in combinations(transversals, 2):
                sa = PointSet(tuple(p.points[i] for i in ta))
                sb = PointSet(tuple(p.points[i] for i in tb))
                assert same_order_type(sa, sb, list(range(4)))


class TestSameTypeRefine:
    def test_fixpoint_on_same_type_input(self):
        p = partition_from_groups(
            [[(0, 0), (1, 1)], [(100, 0), (101, 1)], [(50, 100), (51, 101)]]
        )
        assert same_type_check(p).ok
        res = same_type_refine(p)
        assert res.partition.parts == p.parts
        assert res.beta == 1

    def test_overlapping_clusters_get_repaired(self):
        # clusters in convex position but smeared along one line so the raw
        # partition fails
        rng = random.Random(3)
        groups = []
        for cx, cy in [(0, 0), (300, 10), (150, 400)]:
            groups.append(
                [(cx + rng.randrange(0, 120), cy + rng.randrange(-6, 7)) for _ in range(8)]
            )
        p = partition_from_groups(groups)
        res = same_type_refine(p)
        assert same_type_check(res.partition).ok
        assert all(len(part) >= 1 for part in res.partition.parts)
        assert 0 < res.beta <= 1

    def test_random_square_parts_many_seeds(self):
        # acceptance runs 50 seeds at t=4, parts of 12; keep a faster sample here
        rng = random.Random(77)
        for _ in range(8):
            p = random_square_groups(rng, 4, 12)
            res = same_type_refine(p)
            assert same_type_check(res.partition).ok
            for new, old in zip(res.partition.parts, p.parts):
                assert set(new) <= set(old) and len(new) >= 1

    def test_beta_relative_to_input(self):
        rng = random.Random(11)
        p = random_square_groups(rng, 3, 6)
        res = same_type_refine(p)
        expected = min(
            Fraction(len(n), len(o)) for n, o in zip(res.partition.parts, p.parts)
        )
        assert res.beta == expected

    def test_exhaustive_fallback_small_parts(self):
        rng = random.Random(19)
        for _ in range(6):
            p = random_square_groups(rng, 3, 4, box=40)
            res = same_type_refine(p)
            assert same_type_check(res.partition).ok


class TestVertexTuplePartition:
    def test_rejects_overlap(self):
        ps = PointSet.from_coords([(0, 0), (5, 1), (2, 7)])
        with pytest.raises(ValueError, match="two parts"):
            VertexTuplePartition(ps, ((0, 1), (1, 2)))

    def test_rejects_empty_part(self):
        ps = PointSet.from_coords([(0, 0), (5, 1), (2, 7)])
        with pytest.raises(ValueError, match="empty"):
            VertexTuplePartition(ps, ((0,), ()))
