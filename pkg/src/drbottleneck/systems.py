"""Combinatorial systems and their blocking-system oracles.

A system is a ground set of ``n`` elements together with a feasible family of
subsets given either structurally (s-t paths of a graph, spanning trees,
square assignments) or as an explicit list.  Every system carries two oracle
views used throughout the toolkit:

* feasibility at a cost threshold (does some feasible subset use only
  elements of cost at most ``t``), and
* minimum-weight blocker (the cheapest minimal subset meeting every feasible
  subset: a minimum s-t cut, a global minimum cut, a minimum-weight
  h-by-k submatrix with ``|h| + |k| = m + 1``, or an enumerated minimal
  hitting set).

All objects are immutable after construction and safe to share between
threads; the oracles are pure functions of their arguments.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Union

import numpy as np

from ._graphs import (
    DisjointSets,
    bfs_path_edges,
    global_min_cut_side,
    max_bipartite_matching,
    min_st_cut_side,
)
from .errors import DomainError, EnumerationLimitError, InvalidInstanceError

#: Largest ground set for which explicit blocker enumeration is attempted.
BLOCKER_ENUMERATION_LIMIT = 20
#: Largest assignment side solved by submatrix enumeration.
ASSIGNMENT_BLOCKER_LIMIT = 10


@dataclass(frozen=True)
class GroundSet:
    """The indexed element universe 0..n-1, with optional display labels."""

    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInstanceError("ground set must contain at least one element")
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidInstanceError("label count must equal the ground size")

    def label(self, j: int) -> str:
        if self.labels is not None:
            return self.labels[j]
        return str(j)


@dataclass(frozen=True)
class PathSystem:
    """Feasible subsets are the edge sets of simple s-t paths.

    Each edge is one ground element (its id equals its position in
    ``edges``); parallel edges are allowed, self-loops are not.
    """

    nodes: int
    edges: tuple[tuple[int, int], ...]
    s: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.nodes < 2:
            raise InvalidInstanceError("a path system needs at least two nodes")
        if not (0 <= self.s < self.nodes and 0 <= self.t < self.nodes):
            raise InvalidInstanceError("s and t must be node ids")
        if self.s == self.t:
            raise InvalidInstanceError("s and t must differ")
        for u, v in self.edges:
            if not (0 <= u < self.nodes and 0 <= v < self.nodes):
                raise InvalidInstanceError("edge endpoint out of range")
            if u == v:
                raise InvalidInstanceError("self-loops are not allowed")
        if not self._reaches_t():
            raise InvalidInstanceError("no s-t path exists")

    def _reaches_t(self) -> bool:
        seen = {self.s}
        queue = deque([self.s])
        while queue:
            u = queue.popleft()
            for _, v in self.incidence[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return self.t in seen

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.nodes)]
        for eid, (u, v) in enumerate(self.edges):
            inc[u].append((eid, v))
            inc[v].append((eid, u))
        return tuple(tuple(lst) for lst in inc)

    @property
    def ground(self) -> GroundSet:
        return GroundSet(len(self.edges))


@dataclass(frozen=True)
class TreeSystem:
    """Feasible subsets are the edge sets of spanning trees."""

    nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.nodes < 2:
            raise InvalidInstanceError("a tree system needs at least two nodes")
        for u, v in self.edges:
            if not (0 <= u < self.nodes and 0 <= v < self.nodes):
                raise InvalidInstanceError("edge endpoint out of range")
            if u == v:
                raise InvalidInstanceError("self-loops are not allowed")
        dsu = DisjointSets(self.nodes)
        for u, v in self.edges:
            dsu.union(u, v)
        if dsu.groups != 1:
            raise InvalidInstanceError("graph is not connected; no spanning tree exists")

    @property
    def ground(self) -> GroundSet:
        return GroundSet(len(self.edges))


@dataclass(frozen=True)
class AssignmentSystem:
    """Feasible subsets are the perfect matchings of an m-by-m assignment.

    Ground element ``i * m + j`` is the cell in row ``i``, column ``j``.
    """

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInstanceError("assignment side must be positive")

    def cell(self, i: int, j: int) -> int:
        return i * self.m + j

    def cell_position(self, element: int) -> tuple[int, int]:
        return divmod(element, self.m)

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.m * self.m)


@dataclass(frozen=True)
class ExplicitSystem:
    """Feasible subsets listed explicitly over ground elements 0..n-1."""

    members: tuple[frozenset[int], ...]
    n: int = 0

    def __post_init__(self):
        members = tuple(frozenset(int(e) for e in m) for m in self.members)
        if not members:
            raise InvalidInstanceError("the feasible family must be nonempty")
        for m in members:
            if not m:
                raise InvalidInstanceError("feasible subsets must be nonempty")
        top = max(max(m) for m in members)
        n = self.n if self.n else top + 1
        if top >= n or min(min(m) for m in members) < 0:
            raise InvalidInstanceError("member elements must lie in 0..n-1")
        members = tuple(sorted(set(members), key=lambda m: (len(m), sorted(m))))
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "n", n)

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)


CombinatorialSystem = Union[PathSystem, TreeSystem, AssignmentSystem, ExplicitSystem]


@dataclass(frozen=True)
class Clutter:
    """A family of mutually noncomparable subsets (an antichain)."""

    subsets: tuple[frozenset[int], ...]

    def __post_init__(self):
        subsets = tuple(frozenset(int(e) for e in s) for s in self.subsets)
        if not subsets:
            raise InvalidInstanceError("a clutter must be nonempty")
        subsets = tuple(sorted(set(subsets), key=lambda s: (len(s), sorted(s))))
        for a, b in combinations(subsets, 2):
            if a < b or b < a:
                raise InvalidInstanceError(
                    f"{sorted(a)} and {sorted(b)} are comparable; not a clutter"
                )
        object.__setattr__(self, "subsets", subsets)

    @property
    def universe(self) -> frozenset[int]:
        return frozenset().union(*self.subsets)


@dataclass(frozen=True)
class BlockerElement:
    """A subset meeting every feasible subset, with its structure.

    ``kind`` records how the subset arises: ``"cut"`` (edges crossing a node
    partition; ``partition`` holds the source side), ``"submatrix"`` (all
    cells of a row set ``rows`` times a column set ``cols``), or a plain
    ``"subset"``.  Enumerated blockers are minimal by construction; a
    partition-cut witness can carry weight-zero edges a minimal hitting set
    would drop, which never changes an optimal value.
    """

    elements: frozenset[int]
    kind: str = "subset"
    partition: frozenset[int] | None = None
    rows: frozenset[int] | None = None
    cols: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(int(e) for e in self.elements))


def ground_size(system: CombinatorialSystem) -> int:
    return system.ground.n


def antichain_reduce(family) -> Clutter:
    """Drop every subset that strictly contains another member.

    The reduced family is a clutter with the same min-max bottleneck value as
    the input for every cost vector, because dropping a strict superset never
    removes the minimizer.
    """

    subsets = [frozenset(int(e) for e in s) for s in family]
    if not subsets:
        raise InvalidInstanceError("cannot reduce an empty family")
    unique = sorted(set(subsets), key=lambda s: (len(s), sorted(s)))
    kept = []
    for s in unique:
        if not any(t < s for t in unique):
            kept.append(s)
    return Clutter(tuple(kept))


def _minimize_family(families: list[frozenset]) -> list[frozenset]:
    unique = sorted(set(families), key=lambda s: (len(s), sorted(s)))
    out = []
    for s in unique:
        if not any(t < s for t in out):
            out.append(s)
    return out


def minimal_transversals(members: list[frozenset]) -> list[frozenset]:
    """All minimal hitting sets of a family, by incremental extension.

    Processes members one at a time, keeping the minimal transversals of the
    prefix; each new member either is already hit or spawns one extension per
    element, after which dominated sets are dropped.
    """

    trans: list[frozenset] = [frozenset()]
    for member in members:
        kept = [y for y in trans if y & member]
        grown = [y | {e} for y in trans if not (y & member) for e in member]
        trans = _minimize_family(kept + grown)
    return trans


def blocker_enumerate(clutter: Clutter) -> list[BlockerElement]:
    """The blocker of a clutter: every minimal subset meeting all members.

    Exact enumeration; refuses ground sets larger than
    ``BLOCKER_ENUMERATION_LIMIT`` (use the structural oracles instead).
    """

    if max(clutter.universe) + 1 > BLOCKER_ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            "ground set too large for blocker enumeration; "
            "use a structural min_weight_blocker oracle"
        )
    trans = minimal_transversals(list(clutter.subsets))
    trans.sort(key=lambda y: (len(y), sorted(y)))
    return [BlockerElement(y) for y in trans]


@lru_cache(maxsize=128)
def _explicit_blocker(system: ExplicitSystem) -> tuple[BlockerElement, ...]:
    # systems are immutable, so the enumerated blocker can be memoized
    return tuple(blocker_enumerate(antichain_reduce(system.members)))


def min_weight_blocker(
    system: CombinatorialSystem, weights
) -> tuple[float, BlockerElement]:
    """Minimum total weight over blocker elements, with a minimizer.

    Path systems solve a minimum s-t cut by max-flow, tree systems a global
    minimum cut by contraction, assignments enumerate row/column submatrices
    with ``|rows| + |cols| = m + 1`` (side limited to
    ``ASSIGNMENT_BLOCKER_LIMIT``), and explicit systems scan the enumerated
    blocker.  Weights must be finite and nonnegative.
    """

    w = np.asarray(weights, dtype=float)
    n = ground_size(system)
    if w.shape != (n,):
        raise DomainError(f"expected {n} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite")
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")

    if isinstance(system, PathSystem):
        side = min_st_cut_side(system.nodes, system.edges, w, system.s, system.t)
        elements = frozenset(
            eid
            for eid, (u, v) in enumerate(system.edges)
            if (u in side) != (v in side)
        )
        value = math.fsum(w[j] for j in sorted(elements))
        return value, BlockerElement(elements, kind="cut", partition=frozenset(side))

    if isinstance(system, TreeSystem):
        side = global_min_cut_side(system.nodes, system.edges, w)
        elements = frozenset(
            eid
            for eid, (u, v) in enumerate(system.edges)
            if (u in side) != (v in side)
        )
        value = math.fsum(w[j] for j in sorted(elements))
        return value, BlockerElement(elements, kind="cut", partition=frozenset(side))

    if isinstance(system, AssignmentSystem):
        m = system.m
        if m > ASSIGNMENT_BLOCKER_LIMIT:
            raise EnumerationLimitError(
                f"assignment blocker enumeration limited to m <= {ASSIGNMENT_BLOCKER_LIMIT}"
            )
        grid = w.reshape(m, m)
        best = None
        for a in range(1, m + 1):
            b = m + 1 - a
            if not (1 <= b <= m):
                continue
            for rows in combinations(range(m), a):
                col_sums = grid[list(rows), :].sum(axis=0)
                cols = tuple(sorted(range(m), key=lambda j: (col_sums[j], j))[:b])
                value = math.fsum(
                    grid[i, j] for i in rows for j in sorted(cols)
                )
                key = (value, rows, cols)
                if best is None or key < best:
                    best = key
        value, rows, cols = best
        elements = frozenset(system.cell(i, j) for i in rows for j in cols)
        return value, BlockerElement(
            elements,
            kind="submatrix",
            rows=frozenset(rows),
            cols=frozenset(cols),
        )

    if isinstance(system, ExplicitSystem):
        best_val = None
        best_el = None
        for el in _explicit_blocker(system):
            value = math.fsum(w[j] for j in sorted(el.elements))
            key = (value, sorted(el.elements))
            if best_val is None or key < best_val:
                best_val = key
                best_el = el
        return best_val[0], best_el

    raise DomainError(f"unsupported system type {type(system).__name__}")


def _threshold_witness(
    system: CombinatorialSystem, costs: np.ndarray, t: float
) -> frozenset[int] | None:
    """A feasible subset using only elements of cost <= t, or None.

    The witness is deterministic: BFS paths visit edges in id order, spanning
    forests accept cheap edges in id order, matchings augment rows in order.
    """

    if isinstance(system, PathSystem):
        inc = [
            [(eid, v) for eid, v in system.incidence[u] if costs[eid] <= t]
            for u in range(system.nodes)
        ]
        path = bfs_path_edges(system.nodes, inc, system.s, system.t)
        return None if path is None else frozenset(path)

    if isinstance(system, TreeSystem):
        dsu = DisjointSets(system.nodes)
        accepted = []
        for eid, (u, v) in enumerate(system.edges):
            if costs[eid] <= t and dsu.union(u, v):
                accepted.append(eid)
        return frozenset(accepted) if dsu.groups == 1 else None

    if isinstance(system, AssignmentSystem):
        m = system.m
        allowed = [
            [j for j in range(m) if costs[system.cell(i, j)] <= t] for i in range(m)
        ]
        row_of_col = max_bipartite_matching(m, allowed)
        if any(r < 0 for r in row_of_col):
            return None
        return frozenset(system.cell(r, j) for j, r in enumerate(row_of_col))

    if isinstance(system, ExplicitSystem):
        for member in system.members:
            if all(costs[j] <= t for j in member):
                return member
        return None

    raise DomainError(f"unsupported system type {type(system).__name__}")


def feasible_at_threshold(system: CombinatorialSystem, costs, t: float) -> bool:
    """True iff some feasible subset uses only elements of cost <= t."""
    c = np.asarray(costs, dtype=float)
    if c.shape != (ground_size(system),):
        raise DomainError("cost vector length must equal the ground size")
    if not np.all(np.isfinite(c)):
        raise DomainError("costs must be finite")
    return _threshold_witness(system, c, t) is not None


def min_member_size(system: CombinatorialSystem) -> int:
    """Smallest cardinality over feasible subsets (fewest path edges, etc.)."""
    if isinstance(system, PathSystem):
        inc = [[(eid, v) for eid, v in system.incidence[u]] for u in range(system.nodes)]
        path = bfs_path_edges(system.nodes, inc, system.s, system.t)
        return len(path)
    if isinstance(system, TreeSystem):
        return system.nodes - 1
    if isinstance(system, AssignmentSystem):
        return system.m
    return min(len(m) for m in system.members)


def max_blocker_size(system: CombinatorialSystem) -> tuple[int, bool]:
    """Largest blocker-element cardinality and whether it is exact.

    Assignments have the closed form ``max a * (m + 1 - a)``; explicit and
    small graph systems are enumerated; otherwise the edge count is returned
    as a safe upper bound (flagged inexact).
    """

    if isinstance(system, AssignmentSystem):
        m = system.m
        return max(a * (m + 1 - a) for a in range(1, m + 1)), True
    if isinstance(system, ExplicitSystem):
        blocker = _explicit_blocker(system)
        return max(len(b.elements) for b in blocker), True
    if system.nodes <= 16:
        return _max_minimal_cut_size(system)
    return len(system.edges), False


def _max_minimal_cut_size(system) -> tuple[int, bool]:
    """Exact maximum over minimal cuts by partition enumeration (<= 16 nodes)."""
    n = system.nodes
    anchor = system.s if isinstance(system, PathSystem) else 0
    others = [u for u in range(n) if u != anchor]
    best = 0
    for mask in range(1 << len(others)):
        side = {anchor} | {others[i] for i in range(len(others)) if mask >> i & 1}
        if isinstance(system, PathSystem) and system.t in side:
            continue
        if len(side) == n:
            continue
        crossing = [
            eid for eid, (u, v) in enumerate(system.edges) if (u in side) != (v in side)
        ]
        if not crossing:
            continue
        if _is_minimal_cut(system, side, crossing):
            best = max(best, len(crossing))
    return best, True


def _is_minimal_cut(system, side: set[int], crossing: list[int]) -> bool:
    """A partition cut is a minimal hitting set iff no crossing edge is redundant."""
    removed = set(crossing)
    if isinstance(system, TreeSystem):
        # both sides must be internally connected
        for part in (side, set(range(system.nodes)) - side):
            dsu = DisjointSets(system.nodes)
            for eid, (u, v) in enumerate(system.edges):
                if eid not in removed and u in part and v in part:
                    dsu.union(u, v)
            roots = {dsu.find(u) for u in part}
            if len(roots) != 1:
                return False
        return True
    # path system: s side must be connected and reach every crossing edge,
    # and each far endpoint must still reach t
    dsu = DisjointSets(system.nodes)
    for eid, (u, v) in enumerate(system.edges):
        if eid not in removed:
            dsu.union(u, v)
    s_root = dsu.find(system.s)
    t_root = dsu.find(system.t)
    for eid in crossing:
        u, v = system.edges[eid]
        near, far = (u, v) if u in side else (v, u)
        if dsu.find(near) != s_root or dsu.find(far) != t_root:
            return False
    return True


# ---------------------------------------------------------------------------
# instance JSON


def system_to_json(system: CombinatorialSystem) -> dict:
    if isinstance(system, PathSystem):
        return {
            "type": "path",
            "nodes": system.nodes,
            "edges": [
                {"id": i, "u": u, "v": v} for i, (u, v) in enumerate(system.edges)
            ],
            "s": system.s,
            "t": system.t,
        }
    if isinstance(system, TreeSystem):
        return {
            "type": "tree",
            "nodes": system.nodes,
            "edges": [
                {"id": i, "u": u, "v": v} for i, (u, v) in enumerate(system.edges)
            ],
        }
    if isinstance(system, AssignmentSystem):
        return {"type": "assignment", "m": system.m}
    return {
        "type": "explicit",
        "n": system.n,
        "sets": [sorted(m) for m in system.members],
    }


def _parse_edges(payload: dict) -> tuple[tuple[int, int], ...]:
    edges = payload.get("edges")
    if not isinstance(edges, list):
        raise InvalidInstanceError("instance JSON needs an 'edges' list")
    out = []
    for pos, rec in enumerate(edges):
        try:
            eid, u, v = int(rec["id"]), int(rec["u"]), int(rec["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstanceError(f"malformed edge record at position {pos}") from exc
        if eid != pos:
            raise InvalidInstanceError("edge ids must be 0..n-1 in order")
        out.append((u, v))
    return tuple(out)


def system_from_json(payload) -> CombinatorialSystem:
    """Parse an instance from a JSON string, file object, or dict."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    elif hasattr(payload, "read"):
        payload = json.load(payload)
    if not isinstance(payload, dict) or "type" not in payload:
        raise InvalidInstanceError("instance JSON must be an object with a 'type'")
    kind = payload["type"]
    if kind == "path":
        return PathSystem(
            nodes=int(payload["nodes"]),
            edges=_parse_edges(payload),
            s=int(payload["s"]),
            t=int(payload["t"]),
        )
    if kind == "tree":
        return TreeSystem(nodes=int(payload["nodes"]), edges=_parse_edges(payload))
    if kind == "assignment":
        return AssignmentSystem(m=int(payload["m"]))
    if kind == "explicit":
        sets = payload.get("sets")
        if not isinstance(sets, list):
            raise InvalidInstanceError("explicit instance needs a 'sets' list")
        return ExplicitSystem(
            members=tuple(frozenset(s) for s in sets), n=int(payload.get("n", 0))
        )
    raise InvalidInstanceError(f"unknown instance type {kind!r}")
