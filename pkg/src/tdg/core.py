"""Domain types for topological distance games.

Agents and nodes are 0-based integers.  An assignment is a plain tuple
``placement`` where ``placement[i]`` is the node holding agent ``i``.
All utility values are :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

INFINITE = math.inf

Assignment = tuple  # tuple[int, ...]


class TdgError(ValueError):
    """Raised for malformed instances, assignments, or illegal moves."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``(p, q)`` pairs.

    Floats are rejected: they would silently smuggle rounding in.
    """
    if isinstance(value, bool):
        raise TdgError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise TdgError(f"not a rational: {value!r}") from None
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise TdgError(f"bad rational pair: {value!r}")
        return Fraction(num, den)
    raise TdgError(f"not a rational: {value!r}")


@dataclass(frozen=True)
class TopologyGraph:
    """Simple undirected graph on nodes ``0..node_count-1``; may be disconnected."""

    node_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.node_count < 1:
            raise TdgError("topology needs at least one node")
        norm = set()
        for edge in self.edges:
            a, b = edge
            if a == b:
                raise TdgError(f"self-loop at node {a}")
            if not (0 <= a < self.node_count and 0 <= b < self.node_count):
                raise TdgError(f"edge {edge} out of range")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable) -> "TopologyGraph":
        edges = list(edges)
        seen = set()
        for a, b in edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                raise TdgError(f"duplicate edge {key}")
            seen.add(key)
        return cls(node_count, frozenset(seen))

    @classmethod
    def path(cls, n: int) -> "TopologyGraph":
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "TopologyGraph":
        if n < 3:
            raise TdgError("a cycle needs at least 3 nodes")
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def complete(cls, n: int) -> "TopologyGraph":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def star(cls, n: int) -> "TopologyGraph":
        """Star with ``n`` nodes in total; node 0 is the center."""
        return cls(n, frozenset((0, i) for i in range(1, n)))

    @classmethod
    def disjoint_union(cls, *parts: "TopologyGraph") -> "TopologyGraph":
        offset, edges = 0, set()
        for part in parts:
            edges.update((a + offset, b + offset) for a, b in part.edges)
            offset += part.node_count
        return cls(offset, frozenset(edges))

    @cached_property
    def adjacency(self) -> tuple:
        adj = [[] for _ in range(self.node_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def distances(self) -> tuple:
        return all_pairs_distances(self)

    @cached_property
    def components(self) -> tuple:
        comp = [-1] * self.node_count
        count = 0
        for start in range(self.node_count):
            if comp[start] >= 0:
                continue
            comp[start] = count
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.adjacency[v]:
                    if comp[w] < 0:
                        comp[w] = count
                        stack.append(w)
            count += 1
        return tuple(comp)

    def is_connected(self) -> bool:
        return max(self.components) == 0

    def max_finite_distance(self) -> int:
        return max(d for row in self.distances for d in row if d != INFINITE)

    def diameter(self):
        """Largest distance; ``INFINITE`` for a disconnected graph."""
        return max(d for row in self.distances for d in row)


def all_pairs_distances(topology: TopologyGraph) -> tuple:
    """Hop distances by one breadth-first search per node.

    Cross-component pairs get ``INFINITE``.
    """
    n = topology.node_count
    adj = topology.adjacency
    rows = []
    for source in range(n):
        dist = [INFINITE] * n
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if dist[w] == INFINITE:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        rows.append(tuple(dist))
    return tuple(rows)


@dataclass(frozen=True)
class DistanceFactor:
    """Strictly decreasing positive weight of a distance.

    ``kind`` is ``"reciprocal"`` (f(k) = 1/k) or ``"table"`` where
    ``table[k-1]`` holds f(k).
    """

    kind: str = "reciprocal"
    table: tuple = ()

    def __post_init__(self):
        if self.kind == "reciprocal":
            if self.table:
                raise TdgError("reciprocal factor takes no table")
            return
        if self.kind != "table":
            raise TdgError(f"unknown factor kind {self.kind!r}")
        values = tuple(as_rational(v) for v in self.table)
        if not values:
            raise TdgError("factor table is empty")
        if any(v <= 0 for v in values):
            raise TdgError("factor values must be positive")
        if any(a <= b for a, b in zip(values, values[1:])):
            raise TdgError("factor values must be strictly decreasing")
        object.__setattr__(self, "table", values)

    @classmethod
    def reciprocal(cls) -> "DistanceFactor":
        return cls("reciprocal")

    @classmethod
    def from_table(cls, values: Sequence) -> "DistanceFactor":
        return cls("table", tuple(values))

    def __call__(self, d) -> Fraction:
        return factor_at(self, d)


def factor_at(factor: DistanceFactor, d) -> Fraction:
    if d == INFINITE:
        return Fraction(0)
    if d < 1:
        raise TdgError(f"factor undefined at distance {d}")
    if factor.kind == "reciprocal":
        return Fraction(1, d)
    if d > len(factor.table):
        raise TdgError("factor table too short")
    return factor.table[d - 1]


@dataclass(frozen=True)
class TdgInstance:
    """Utilities, topology and distance factor of one game.

    ``utilities[i][j]`` is agent i's inherent utility for agent j.
    """

    utilities: tuple
    topology: TopologyGraph
    factor: DistanceFactor = field(default_factory=DistanceFactor.reciprocal)

    def __post_init__(self):
        rows = tuple(tuple(as_rational(x) for x in row) for row in self.utilities)
        n = len(rows)
        if n < 1:
            raise TdgError("instance needs at least one agent")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise TdgError(f"utility row {i} has length {len(row)}, expected {n}")
            if row[i] != 0:
                raise TdgError(f"utility of agent {i} for herself must be 0")
        if self.topology.node_count < n:
            raise TdgError(f"{n} agents do not fit on {self.topology.node_count} nodes")
        object.__setattr__(self, "utilities", rows)
        if self.factor.kind == "table" and self.topology.node_count > 1:
            far = max(d for row in self.topology.distances for d in row if d != INFINITE)
            if far > len(self.factor.table):
                raise TdgError("factor table too short")

    @classmethod
    def from_sparse(cls, n: int, entries, topology, factor=None) -> "TdgInstance":
        """Build from ``{(i, j): value}`` or an iterable of ``(i, j, value)``."""
        if isinstance(entries, dict):
            entries = [(i, j, v) for (i, j), v in entries.items()]
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i, j, value in entries:
            rows[i][j] = as_rational(value)
        return cls(tuple(map(tuple, rows)), topology, factor or DistanceFactor.reciprocal())

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def node_count(self) -> int:
        return self.topology.node_count

    def is_symmetric(self) -> bool:
        u = self.utilities
        return all(u[i][j] == u[j][i] for i in range(self.n) for j in range(i))

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.utilities for x in row)

    def friends(self, i: int) -> list:
        return [j for j, x in enumerate(self.utilities[i]) if x > 0]

    @cached_property
    def _scaled(self) -> "_ScaledView":
        return _ScaledView(self)


class _ScaledView:
    """Integer image of an instance for fast exact comparisons.

    Every utility is multiplied by ``u_scale`` and every factor value by
    ``f_scale``; both are common denominators, so all products are ints and
    ``utility = int_value / (u_scale * f_scale)`` exactly.
    """

    def __init__(self, instance: TdgInstance):
        topo = instance.topology
        dist = topo.distances
        finite = sorted({d for row in dist for d in row if d != INFINITE and d > 0})
        values = {d: factor_at(instance.factor, d) for d in finite}
        self.f_scale = math.lcm(*(v.denominator for v in values.values())) if values else 1
        self.u_scale = math.lcm(*(x.denominator for row in instance.utilities for x in row))
        scaled = {d: int(v * self.f_scale) for d, v in values.items()}
        scaled[0] = 0  # only reached for i == j, which rows never include
        self.factor = tuple(
            tuple(0 if d == INFINITE else scaled[d] for d in row) for row in dist
        )
        self.rows = tuple(
            tuple((j, int(x * self.u_scale)) for j, x in enumerate(row) if x != 0)
            for row in instance.utilities
        )
        self.scale = self.u_scale * self.f_scale

    def value_at(self, placement, i: int, node: int) -> int:
        frow = self.factor[node]
        return sum(frow[placement[j]] * w for j, w in self.rows[i])

    def value(self, placement, i: int) -> int:
        frow = self.factor[placement[i]]
        return sum(frow[placement[j]] * w for j, w in self.rows[i])

    def to_rational(self, value: int) -> Fraction:
        return Fraction(value, self.scale)


def check_assignment(instance: TdgInstance, placement) -> Assignment:
    placement = tuple(placement)
    if len(placement) != instance.n:
        raise TdgError(f"assignment has {len(placement)} entries, expected {instance.n}")
    for v in placement:
        if not isinstance(v, int) or not 0 <= v < instance.node_count:
            raise TdgError(f"node {v!r} out of range")
    if len(set(placement)) != len(placement):
        raise TdgError("assignment is not injective")
    return placement


def empty_nodes(instance: TdgInstance, placement) -> list:
    taken = set(placement)
    return [v for v in range(instance.node_count) if v not in taken]


def utility(instance: TdgInstance, placement, i: int) -> Fraction:
    """Distance-weighted sum of agent ``i``'s inherent utilities."""
    view = instance._scaled
    return view.to_rational(view.value(placement, i))


def jump(placement, i: int, v: int) -> Assignment:
    placement = tuple(placement)
    if v in placement:
        raise TdgError("target occupied")
    return placement[:i] + (v,) + placement[i + 1:]


def swap(placement, i: int, j: int) -> Assignment:
    if i == j:
        raise TdgError("self swap")
    out = list(placement)
    out[i], out[j] = out[j], out[i]
    return tuple(out)


@dataclass(frozen=True)
class FriendshipGraph:
    """Directed graph with an arc i -> j exactly when u_i(j) > 0."""

    n: int
    arcs: frozenset

    def out_neighbors(self, i: int) -> list:
        return sorted(j for a, j in self.arcs if a == i)

    def out_degree(self, i: int) -> int:
        return sum(1 for a, _ in self.arcs if a == i)

    def topological_order(self):
        """Friends-first order (Kahn, lowest index first); ``None`` if cyclic.

        An agent appears only after every agent she has positive utility for.
        """
        import heapq

        pending = [0] * self.n
        dependents = [[] for _ in range(self.n)]
        for i, j in self.arcs:
            pending[i] += 1
            dependents[j].append(i)
        ready = [i for i in range(self.n) if pending[i] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            j = heapq.heappop(ready)
            order.append(j)
            for i in dependents[j]:
                pending[i] -= 1
                if pending[i] == 0:
                    heapq.heappush(ready, i)
        return order if len(order) == self.n else None

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None


def friendship_graph(utilities) -> FriendshipGraph:
    if isinstance(utilities, TdgInstance):
        utilities = utilities.utilities
    arcs = frozenset(
        (i, j) for i, row in enumerate(utilities) for j, x in enumerate(row) if x > 0
    )
    return FriendshipGraph(len(utilities), arcs)
