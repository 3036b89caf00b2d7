"""Robust decision models over empirical scenarios.

The sample-average decision minimizes the mean of per-scenario maxima.  Its
worst-case counterpart over the order-infinity Wasserstein ball keeps the
same minimizer and shifts the value by exactly the radius, which motivates
two refinements implemented here: the variance-robust model (least sampling
variance among near-optimal subsets) and the total-variation model.  Top-k
variants score subsets by the per-scenario sum of their k largest costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantViolationError
from .scenarios import ScenarioSet, require_matching_width
from .search import check_search_guard, iter_members, minimize_members
from .systems import AssignmentSystem, CombinatorialSystem, min_member_size


@dataclass(frozen=True)
class DecisionReport:
    """A chosen subset with its per-scenario objective profile.

    ``variance`` uses the population convention (divisor N), matching the
    sampling-variance objective of the variance-robust model.
    """

    chosen: frozenset[int]
    objective: float
    per_scenario: tuple[float, ...]
    mean: float
    variance: float
    model: str

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "chosen": sorted(self.chosen),
            "objective": self.objective,
            "per_scenario": list(self.per_scenario),
            "mean": self.mean,
            "variance": self.variance,
        }


@dataclass(frozen=True)
class IndifferenceSet:
    """Subsets whose empirical mean objective is within the threshold."""

    threshold: float
    baseline: DecisionReport
    members: tuple[frozenset[int], ...] | None
    scenarios: ScenarioSet

    def contains(self, elements) -> bool:
        """Membership test: mean per-scenario maximum within the threshold."""
        values = _scenario_maxima(self.scenarios.costs, frozenset(elements))
        return _mean(values) <= self.threshold


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _population_variance(values, mean: float) -> float:
    return math.fsum((v - mean) ** 2 for v in values) / len(values)


def _scenario_maxima(costs: np.ndarray, elements: frozenset[int]) -> list[float]:
    cols = sorted(elements)
    return [float(x) for x in costs[:, cols].max(axis=1)]


def _scenario_topk(costs: np.ndarray, elements: frozenset[int], k: int) -> list[float]:
    cols = sorted(elements)
    take = min(k, len(cols))
    block = np.sort(costs[:, cols], axis=1)[:, -take:]
    return [math.fsum(row) for row in block]


def _mean_max_bound(costs: np.ndarray):
    def bound(elements: frozenset[int]) -> float:
        if not elements:
            return -math.inf
        return _mean(_scenario_maxima(costs, elements))

    return bound


def _report(chosen, objective, values, model) -> DecisionReport:
    mean = _mean(values)
    return DecisionReport(
        chosen=chosen,
        objective=objective,
        per_scenario=tuple(values),
        mean=mean,
        variance=_population_variance(values, mean),
        model=model,
    )


def saa_decision(
    system: CombinatorialSystem, scenarios: ScenarioSet, force: bool = False
) -> DecisionReport:
    """Exact minimizer of the mean of per-scenario maxima.

    Best-first branch and bound; the mean of maxima over the elements forced
    so far is an admissible bound.  Ties are broken by the lexicographically
    smallest element set.
    """

    require_matching_width(scenarios, system)
    value, chosen = minimize_members(system, _mean_max_bound(scenarios.costs), force)
    return _report(chosen, value, _scenario_maxima(scenarios.costs, chosen), "saa")


def robust_decision(
    system: CombinatorialSystem,
    scenarios: ScenarioSet,
    radius: float,
    force: bool = False,
) -> DecisionReport:
    """Worst-case expected decision over the order-infinity ball.

    The optimal subset coincides with the sample-average optimum for every
    radius and every ground norm; the objective shifts by exactly the radius.
    """

    if radius < 0:
        raise DomainError("radius must be nonnegative")
    base = saa_decision(system, scenarios, force=force)
    return DecisionReport(
        chosen=base.chosen,
        objective=base.objective + radius,
        per_scenario=base.per_scenario,
        mean=base.mean,
        variance=base.variance,
        model="wasserstein-robust",
    )


def decision_worst_case_distribution(
    chosen: frozenset[int], scenarios: ScenarioSet, radius: float
) -> np.ndarray:
    """Support points of the worst case for a fixed subset.

    Per scenario, the cost of the subset's most expensive element (smallest
    index on ties) is raised by the radius; the subset's worst-case mean is
    then its empirical mean plus the radius, exactly.
    """

    if radius < 0:
        raise DomainError("radius must be nonnegative")
    cols = sorted(chosen)
    if not cols:
        raise DomainError("chosen subset must be nonempty")
    support = np.array(scenarios.costs, dtype=float)
    for k in range(scenarios.count):
        row = support[k]
        peak = max(cols, key=lambda j: (row[j], -j))
        row[peak] += radius
    return support


def calibrate_radius_decision(
    sample_count: int, sigma: float, epsilon: float, ground_n: int
) -> float:
    """Decision-side radius: sigma * sqrt(-3 log eps + 3 n log 2) / sqrt(N).

    ``ground_n = 0`` drops the union-bound term, leaving the per-solution
    confidence half-width sigma * sqrt(-3 log eps) / sqrt(N).
    """

    if sample_count < 1:
        raise DomainError("sample count must be at least 1")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    if ground_n < 0:
        raise DomainError("ground size must be nonnegative")
    return sigma * math.sqrt(
        -3.0 * math.log(epsilon) + 3.0 * ground_n * math.log(2.0)
    ) / math.sqrt(sample_count)


def normal_approx_radius(per_scenario_values, z: float = 1.645) -> float:
    """Rule-of-thumb indifference radius: z * sqrt(variance / N).

    Approximates the one-sided confidence half-width of the empirical mean
    objective (population-variance convention).
    """

    values = list(per_scenario_values)
    mean = _mean(values)
    return z * math.sqrt(_population_variance(values, mean) / len(values))


def indifference_set(
    system: CombinatorialSystem,
    scenarios: ScenarioSet,
    radius: float,
    materialize: bool = False,
    force: bool = False,
) -> IndifferenceSet:
    """Subsets whose mean objective is at most the optimum plus the radius.

    Materialization enumerates the set (guarded); otherwise only the
    threshold and the baseline report are returned, and membership can be
    tested against the threshold.
    """

    if radius < 0:
        raise DomainError("radius must be nonnegative")
    base = saa_decision(system, scenarios, force=force)
    threshold = base.objective + radius
    members = None
    if materialize:
        bound = _mean_max_bound(scenarios.costs)
        limit = threshold + 1e-12 * (1.0 + abs(threshold))
        members = tuple(
            sorted(
                (
                    m
                    for m in iter_members(
                        system, prune=lambda els: bool(els) and bound(els) > limit
                    )
                    if bound(m) <= threshold
                ),
                key=lambda m: tuple(sorted(m)),
            )
        )
    return IndifferenceSet(
        threshold=threshold, baseline=base, members=members, scenarios=scenarios
    )


def variance_robust_decision(
    system: CombinatorialSystem,
    scenarios: ScenarioSet,
    radius: float,
    force: bool = False,
) -> DecisionReport:
    """Least sampling variance among subsets within the indifference set.

    Enumerates members whose mean objective stays under the sample-average
    optimum plus the radius (mean bound pruned during search; the variance
    itself admits no useful lower bound) and returns the variance minimizer,
    ties broken lexicographically.
    """

    if radius < 0:
        raise DomainError("radius must be nonnegative")
    check_search_guard(system, force)
    base = saa_decision(system, scenarios, force=force)
    threshold = base.objective + radius
    bound = _mean_max_bound(scenarios.costs)
    # monotone bounds can invert by an ulp on partial sets; prune tolerantly
    limit = threshold + 1e-12 * (1.0 + abs(threshold))
    best_key = None
    best = None
    for member in iter_members(
        system, prune=lambda els: bool(els) and bound(els) > limit
    ):
        values = _scenario_maxima(scenarios.costs, member)
        mean = _mean(values)
        if mean > threshold:
            continue
        variance = _population_variance(values, mean)
        key = (variance, tuple(sorted(member)))
        if best_key is None or key < best_key:
            best_key = key
            best = (member, variance, values)
    if best is None:
        raise InvariantViolationError(
            "indifference set came back empty; it must contain the SAA optimum"
        )
    member, variance, values = best
    return _report(member, variance, values, "variance-robust")


def tv_robust_decision(
    system: CombinatorialSystem,
    scenarios: ScenarioSet,
    tv_radius: float,
    force: bool = False,
) -> DecisionReport:
    """Worst-case expected decision over a total-variation ball.

    For a fixed subset with per-scenario values v^k the inner worst case is
    min over beta of (1 - d/2) beta + mean((v - beta)_+) + (d/2) max v; the
    objective is piecewise linear in beta with breakpoints at the v^k, so
    scanning the breakpoints is exact.  At d = 0 this is the sample mean, at
    d = 2 the worst scenario.
    """

    if not 0.0 <= tv_radius <= 2.0:
        raise DomainError("total-variation radius must lie in [0, 2]")
    require_matching_width(scenarios, system)
    d = tv_radius

    def bound(elements: frozenset[int]) -> float:
        if not elements:
            return -math.inf
        return _tv_objective(_scenario_maxima(scenarios.costs, elements), d)

    value, chosen = minimize_members(system, bound, force)
    values = _scenario_maxima(scenarios.costs, chosen)
    return _report(chosen, value, values, "total-variation")


def _tv_objective(values, d: float) -> float:
    worst = max(values)
    n = len(values)
    best = math.inf
    for beta in sorted(set(values)):
        shortfall = math.fsum(v - beta for v in values if v > beta) / n
        best = min(best, (1.0 - d / 2.0) * beta + shortfall + d * worst / 2.0)
    return best


def topk_decision(
    system: CombinatorialSystem,
    scenarios: ScenarioSet,
    radius: float,
    k: int,
    ground_order: float = 1.0,
    force: bool = False,
) -> DecisionReport:
    """Robust top-k-sum decision over the order-infinity ball.

    The sample-average top-k optimum is found by branch and bound (the
    per-scenario top-k sum of the forced elements is admissible), then the
    objective is shifted by k^((r-1)/r) times the radius; the minimizer is
    shared with the sample-average problem.
    """

    if radius < 0:
        raise DomainError("radius must be nonnegative")
    r = float(ground_order)
    if r < 1:
        raise DomainError("ground norm order must be at least 1")
    require_matching_width(scenarios, system)
    if k < 1 or k > min_member_size(system):
        raise DomainError("k must lie between 1 and the smallest member size")

    def bound(elements: frozenset[int]) -> float:
        if not elements:
            return -math.inf
        return _mean(_scenario_topk(scenarios.costs, elements, k))

    saa_val, chosen = minimize_members(system, bound, force)
    values = _scenario_topk(scenarios.costs, chosen, k)
    shift = k ** ((r - 1.0) / r) * radius
    mean = _mean(values)
    return DecisionReport(
        chosen=chosen,
        objective=saa_val + shift,
        per_scenario=tuple(values),
        mean=mean,
        variance=_population_variance(values, mean),
        model="topk-robust",
    )


def topk_variance_robust_decision(
    system: CombinatorialSystem,
    scenarios: ScenarioSet,
    radius: float,
    k: int,
    ground_order: float = 1.0,
    force: bool = False,
) -> DecisionReport:
    """Variance-robust model with per-scenario top-k sums.

    The indifference threshold is the sample-average top-k optimum plus
    k^((r-1)/r) times the radius.
    """

    if radius < 0:
        raise DomainError("radius must be nonnegative")
    r = float(ground_order)
    check_search_guard(system, force)
    require_matching_width(scenarios, system)
    if k < 1 or k > min_member_size(system):
        raise DomainError("k must lie between 1 and the smallest member size")

    def bound(elements: frozenset[int]) -> float:
        if not elements:
            return -math.inf
        return _mean(_scenario_topk(scenarios.costs, elements, k))

    saa_val, _ = minimize_members(system, bound, force)
    threshold = saa_val + k ** ((r - 1.0) / r) * radius
    limit = threshold + 1e-12 * (1.0 + abs(threshold))
    best_key = None
    best = None
    for member in iter_members(
        system, prune=lambda els: bool(els) and bound(els) > limit
    ):
        values = _scenario_topk(scenarios.costs, member, k)
        mean = _mean(values)
        if mean > threshold:
            continue
        variance = _population_variance(values, mean)
        key = (variance, tuple(sorted(member)))
        if best_key is None or key < best_key:
            best_key = key
            best = (member, variance, values)
    if best is None:
        raise InvariantViolationError(
            "top-k indifference set came back empty; it must contain the optimum"
        )
    member, variance, values = best
    return _report(member, variance, values, "topk-variance-robust")


def calibrate_radius_topk_decision(
    sample_count: int,
    sigma: float,
    epsilon: float,
    ground_n: int,
    k: int,
    ground_order: float = 1.0,
) -> float:
    """Top-k decision radius: the plain decision radius times k^(-(r-1)/r)."""
    r = float(ground_order)
    return calibrate_radius_decision(sample_count, sigma, epsilon, ground_n) * k ** (
        -(r - 1.0) / r
    )


def matching_permutation(system: AssignmentSystem, chosen: frozenset[int]) -> list[int]:
    """Column assigned to each row, for matchings of an assignment system."""
    perm = [-1] * system.m
    for element in chosen:
        i, j = system.cell_position(element)
        perm[i] = j
    if any(j < 0 for j in perm):
        raise DomainError("chosen subset is not a perfect matching")
    return perm
