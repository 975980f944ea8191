"""Same-type transversals: exact checking and verified refinement.

A tuple of disjoint point sets has same-type transversals when every choice
of one point per set yields the same order type. Because order types are
determined by triples, it suffices that for every three set indices the
orientation over all point choices is constant; the checker tests exactly
that and reports a sign-flipping pair on failure.

The refiner repairs violations by cutting a part along the line through two
fixed witness points and keeping the majority side. Every cut strictly
shrinks a part, so the loop terminates (singleton parts pass trivially);
small instances switch to an exhaustive best-first subset search. The output
is always re-verified by the checker before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .geometry import PointSet, sign_subtensor


@dataclass(frozen=True)
class VertexTuplePartition:
    """Disjoint vertex-id groups over one point set."""

    points: PointSet
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.points)
        parts = tuple(tuple(sorted(int(v) for v in p)) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        seen: set[int] = set()
        for idx, part in enumerate(parts):
            if not part:
                raise ValueError(f"part {idx} is empty")
            for v in part:
                if not 0 <= v < n:
                    raise ValueError(f"part {idx} references missing vertex {v}")
                if v in seen:
                    raise ValueError(f"vertex {v} appears in two parts")
                seen.add(v)

    @property
    def t(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class SameTypeWitness:
    """Two point triples from the same three parts with opposite signs."""

    part_triple: tuple[int, int, int]
    first: tuple[int, int, int]
    second: tuple[int, int, int]


@dataclass(frozen=True)
class SameTypeResult:
    ok: bool
    witness: SameTypeWitness | None


class _TensorView:
    """Orientation signs restricted to the union of the parts."""

    def __init__(self, partition: VertexTuplePartition):
        ids = sorted(v for part in partition.parts for v in part)
        self.pos = {v: i for i, v in enumerate(ids)}
        self.tensor = sign_subtensor(partition.points, ids)

    def block(self, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> np.ndarray:
        ia = [self.pos[v] for v in a]
        ib = [self.pos[v] for v in b]
        ic = [self.pos[v] for v in c]
        return self.tensor[np.ix_(ia, ib, ic)]


def _check_with_view(partition: VertexTuplePartition, view: _TensorView) -> SameTypeResult:
    parts = partition.parts
    for a, b, c in combinations(range(len(parts)), 3):
        blk = view.block(parts[a], parts[b], parts[c])
        if blk.min() == blk.max():
            continue
        lo = np.unravel_index(int(blk.argmin()), blk.shape)
        hi = np.unravel_index(int(blk.argmax()), blk.shape)
        witness = SameTypeWitness(
            part_triple=(a, b, c),
            first=(parts[a][lo[0]], parts[b][lo[1]], parts[c][lo[2]]),
            second=(parts[a][hi[0]], parts[b][hi[1]], parts[c][hi[2]]),
        )
        return SameTypeResult(ok=False, witness=witness)
    return SameTypeResult(ok=True, witness=None)


def same_type_check(partition: VertexTuplePartition) -> SameTypeResult:
    """Exact same-type transversal test; vacuously true for fewer than 3 parts."""
    if partition.t < 3:
        return SameTypeResult(ok=True, witness=None)
    return _check_with_view(partition, _TensorView(partition))


@dataclass(frozen=True)
class RefineResult:
    partition: VertexTuplePartition
    beta: Fraction  # min over parts of kept/original size
    cuts: int
    exhaustive_checks: int


def _find_cut(parts, triple, view):
    # Look for a single-coordinate sign flip: two fixed points, both signs
    # present across the third part. Prefer cutting the largest part.
    a, b, c = triple
    blk = view.block(parts[a], parts[b], parts[c])
    roles = sorted(range(3), key=lambda r: -len(parts[triple[r]]))
    for role in roles:
        axis = role
        mn = blk.min(axis=axis)
        mx = blk.max(axis=axis)
        hits = np.argwhere(mn != mx)
        if hits.size == 0:
            continue
        fixed = tuple(int(x) for x in hits[0])
        take = [slice(None)] * 3
        others = [r for r in range(3) if r != role]
        for pos, r in enumerate(others):
            take[r] = fixed[pos]
        line = blk[tuple(take)]  # signs of the varying part against the cut line
        part_idx = triple[role]
        keep_plus = [parts[part_idx][i] for i in range(len(line)) if line[i] > 0]
        keep_minus = [parts[part_idx][i] for i in range(len(line)) if line[i] < 0]
        if len(keep_plus) >= len(keep_minus):
            kept = keep_plus
        else:
            kept = keep_minus
        return part_idx, tuple(kept)
    return None


def _exhaustive_search(partition, view, budget):
    # Best-first over subset-size vectors: maximize the smallest kept part,
    # then the total kept. Singletons always pass, so this cannot fail, but
    # the scan stops at the budget and lets the cut loop take over.
    parts = partition.parts
    sizes = [len(p) for p in parts]
    vectors = sorted(
        product(*(range(1, s + 1) for s in sizes)),
        key=lambda v: (-min(v), -sum(v), v),
    )
    checks = 0
    for vec in vectors:
        for chosen in product(*(combinations(p, s) for p, s in zip(parts, vec))):
            checks += 1
            cand = VertexTuplePartition(partition.points, tuple(chosen))
            if _check_with_view(cand, view).ok:
                return cand, checks
            if checks >= budget:
                return None, checks
    return None, checks  # unreachable: the all-singleton vector passes


def same_type_refine(
    partition: VertexTuplePartition,
    max_cuts: int = 100_000,
    exhaustive_part_size: int = 5,
    exhaustive_budget: int = 100_000,
) -> RefineResult:
    """Shrink each part until the family has same-type transversals.

    The result is certified by same_type_check before returning; beta
    reports the worst kept fraction relative to the input sizes. The
    iteration caps exist as a safety valve; the cut loop itself always
    makes strict progress.
    """
    view = _TensorView(partition)
    original = partition.parts
    current = partition
    cuts = 0
    checks = 0
    exhaustive_done = False
    while True:
        res = _check_with_view(current, view)
        if res.ok:
            break
        if not exhaustive_done and all(
            len(p) <= exhaustive_part_size for p in current.parts
        ):
            exhaustive_done = True
            found, used = _exhaustive_search(current, view, exhaustive_budget)
            checks += used
            if found is not None:
                current = found
                break
        if cuts >= max_cuts:
            raise RuntimeError(
                f"refinement cap of {max_cuts} cuts exhausted; "
                f"best so far {[len(p) for p in current.parts]} of "
                f"{[len(p) for p in original]}"
            )
        cut = _find_cut(current.parts, res.witness.part_triple, view)
        if cut is None:  # cannot happen: a violation always admits a cut
            raise RuntimeError("violation without a single-coordinate flip")
        part_idx, kept = cut
        new_parts = list(current.parts)
        new_parts[part_idx] = kept
        current = VertexTuplePartition(partition.points, tuple(new_parts))
        cuts += 1

    final = same_type_check(current)
    if not final.ok:
        raise RuntimeError("refinement returned a partition that fails the checker")
    beta = min(
        (Fraction(len(new), len(old)) for new, old in zip(current.parts, original)),
        default=Fraction(1),
    )
    return RefineResult(partition=current, beta=beta, cuts=cuts, exhaustive_checks=checks)
