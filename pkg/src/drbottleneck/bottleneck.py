"""Deterministic bottleneck and top-k-sum evaluation with dual certificates.

The bottleneck value of a cost vector is the least possible maximum element
cost over feasible subsets.  Its dual form maximizes, over blocker elements,
the minimum element cost; both are computed here by threshold search so each
can certify the other.  The top-k generalization scores a subset by the sum
of its k largest costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, EnumerationLimitError, InvariantViolationError
from .search import enumerate_members, minimize_members
from .systems import (
    BlockerElement,
    Clutter,
    CombinatorialSystem,
    _threshold_witness,
    ground_size,
    min_member_size,
    min_weight_blocker,
    minimal_transversals,
)

TOPK_BLOCKER_MAX_GROUND = 8
TOPK_BLOCKER_MAX_K = 3


@dataclass(frozen=True)
class BottleneckResult:
    """Optimal value with a primal member and a dual blocker certificate."""

    value: float
    argmin_subset: frozenset[int]
    dual_witness: BlockerElement


def _validated_costs(system: CombinatorialSystem, costs) -> np.ndarray:
    c = np.asarray(costs, dtype=float)
    if c.shape != (ground_size(system),):
        raise DomainError("cost vector length must equal the ground size")
    if not np.all(np.isfinite(c)):
        raise DomainError("costs must be finite")
    return c


def _zero_weight_blocker(system, c: np.ndarray, level: float) -> BlockerElement:
    """A blocker element avoiding all elements cheaper than ``level``."""
    weights = (c < level).astype(float)
    value, witness = min_weight_blocker(system, weights)
    if value != 0.0:
        raise InvariantViolationError(
            "no blocker element attains the bottleneck level; duality is broken"
        )
    return witness


def bottleneck_value(system: CombinatorialSystem, costs) -> BottleneckResult:
    """Least max-cost over feasible subsets, by threshold bisection.

    Feasibility uses the closed threshold (cost <= t), so the optimum is the
    smallest distinct cost passing the test and is always attained.  The
    returned member is the deterministic feasibility witness at the optimum;
    the dual witness is a blocker element whose minimum cost equals the value.
    """

    c = _validated_costs(system, costs)
    levels = np.unique(c)
    lo, hi = 0, len(levels) - 1
    if _threshold_witness(system, c, levels[hi]) is None:
        raise DomainError("system is infeasible at the largest cost")
    while lo < hi:
        mid = (lo + hi) // 2
        if _threshold_witness(system, c, levels[mid]) is None:
            lo = mid + 1
        else:
            hi = mid
    value = float(levels[lo])
    member = _threshold_witness(system, c, value)
    witness = _zero_weight_blocker(system, c, value)
    return BottleneckResult(value, member, witness)


def dual_bottleneck_value(system: CombinatorialSystem, costs) -> float:
    """Max over blocker elements of their minimum cost.

    Computed by bisecting the distinct costs with the minimum-weight blocker
    oracle (a level is attainable iff some blocker element avoids every
    cheaper element), which keeps the route independent of the primal
    threshold search.
    """

    c = _validated_costs(system, costs)
    levels = np.unique(c)

    def attainable(level: float) -> bool:
        weights = (c < level).astype(float)
        value, _ = min_weight_blocker(system, weights)
        return value == 0.0

    lo, hi = 0, len(levels) - 1
    # the smallest cost is always attainable; find the largest one that is
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if attainable(levels[mid]):
            lo = mid
        else:
            hi = mid - 1
    return float(levels[lo])


def _topk_sum(values: np.ndarray, k: int) -> float:
    take = min(k, len(values))
    if take == 0:
        return 0.0
    return float(np.sort(values)[-take:].sum())


def topk_sum_value(
    system: CombinatorialSystem, costs, k: int, force: bool = False
) -> tuple[float, frozenset[int]]:
    """Least sum of the k largest costs over feasible subsets.

    Solved by best-first branch and bound: the top-k sum of the elements
    forced so far never decreases when a subset grows, so it is an
    admissible bound.  Every feasible subset must have at least k elements.
    """

    c = _validated_costs(system, costs)
    if k < 1:
        raise DomainError("k must be a positive integer")
    if k > min_member_size(system):
        raise DomainError(
            f"k={k} exceeds the smallest feasible subset ({min_member_size(system)})"
        )

    def bound(elements: frozenset[int]) -> float:
        return _topk_sum(c[sorted(elements)], k) if elements else 0.0

    return minimize_members(system, bound, force=force)


def topk_blocker_enumerate(clutter: Clutter, k: int) -> list[frozenset[frozenset[int]]]:
    """Minimal families of k-subsets meeting every member's k-subset family.

    Each returned family intersects, for every clutter member h, the
    collection of size-k subsets of h, and is minimal with that property.
    Exact enumeration, guarded to tiny instances.
    """

    if k < 1:
        raise DomainError("k must be a positive integer")
    universe = clutter.universe
    if max(universe) + 1 > TOPK_BLOCKER_MAX_GROUND or k > TOPK_BLOCKER_MAX_K:
        raise EnumerationLimitError(
            f"top-k blocker enumeration limited to ground <= {TOPK_BLOCKER_MAX_GROUND} "
            f"and k <= {TOPK_BLOCKER_MAX_K}"
        )
    if any(len(h) < k for h in clutter.subsets):
        raise DomainError("every clutter member needs at least k elements")

    vertex_of: dict[frozenset[int], int] = {}
    vertices: list[frozenset[int]] = []
    hyperedges = []
    for h in clutter.subsets:
        ids = set()
        for s in combinations(sorted(h), k):
            key = frozenset(s)
            if key not in vertex_of:
                vertex_of[key] = len(vertices)
                vertices.append(key)
            ids.add(vertex_of[key])
        hyperedges.append(frozenset(ids))

    families = minimal_transversals(hyperedges)
    out = [frozenset(vertices[i] for i in fam) for fam in families]
    out.sort(key=lambda fam: (len(fam), sorted(sorted(s) for s in fam)))
    return out


def dual_topk_sum_value(system: CombinatorialSystem, costs, k: int) -> float:
    """Max over top-k blocker families of the least member-subset cost sum.

    Tiny-scale dual certificate for :func:`topk_sum_value`, via explicit
    enumeration of both the feasible family and its top-k blocker.
    """

    from .systems import antichain_reduce

    c = _validated_costs(system, costs)
    clutter = antichain_reduce(enumerate_members(system))
    families = topk_blocker_enumerate(clutter, k)
    best = -math.inf
    for fam in families:
        worst = min(math.fsum(c[j] for j in sorted(s)) for s in fam)
        best = max(best, worst)
    return best
