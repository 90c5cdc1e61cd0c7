"""Shared generators and an independent utility oracle for the tests."""

from __future__ import annotations

import random
from fractions import Fraction

import networkx as nx

from tdg import DistanceFactor, TdgInstance, TopologyGraph


def naive_utility(instance: TdgInstance, placement, i: int) -> Fraction:
    """Utility straight from the definition, with networkx shortest paths."""
    g = nx.Graph()
    g.add_nodes_from(range(instance.node_count))
    g.add_edges_from(instance.topology.edges)
    dist = nx.single_source_shortest_path_length(g, placement[i])
    total = Fraction(0)
    for j in range(instance.n):
        if j == i or placement[j] not in dist:
            continue
        d = dist[placement[j]]
        f = Fraction(1, d) if instance.factor.kind == "reciprocal" else instance.factor.table[d - 1]
        total += f * instance.utilities[i][j]
    return total


def naive_jump_stable(instance, placement) -> bool:
    taken = set(placement)
    for i in range(instance.n):
        here = naive_utility(instance, placement, i)
        for v in range(instance.node_count):
            if v in taken:
                continue
            moved = list(placement)
            moved[i] = v
            if naive_utility(instance, moved, i) > here:
                return False
    return True


def random_rational(rng: random.Random, lo=-3, hi=3, den=4) -> Fraction:
    q = rng.randint(1, den)
    return Fraction(rng.randint(lo * q, hi * q), q)


def random_topology(rng: random.Random, nodes: int, p: float = 0.4) -> TopologyGraph:
    edges = [(a, b) for a in range(nodes) for b in range(a + 1, nodes) if rng.random() < p]
    return TopologyGraph(nodes, frozenset(edges))


def random_factor(rng: random.Random, topology: TopologyGraph) -> DistanceFactor:
    """Reciprocal half of the time, otherwise a random strictly decreasing table."""
    if rng.random() < 0.5:
        return DistanceFactor.reciprocal()
    length = max(1, topology.max_finite_distance() if topology.edges else 1)
    values, current = [], Fraction(rng.randint(5, 9))
    for _ in range(length):
        values.append(current)
        current *= Fraction(rng.randint(1, 4), 5)
    return DistanceFactor.from_table(values)


def random_symmetric(rng: random.Random, n: int, nodes: int) -> TdgInstance:
    topo = random_topology(rng, nodes)
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            u[i][j] = u[j][i] = random_rational(rng)
    return TdgInstance(tuple(map(tuple, u)), topo, random_factor(rng, topo))


def random_dag_nonnegative(rng: random.Random, n: int, nodes: int, topo=None) -> TdgInstance:
    """Friendship arcs only from later to earlier agents of a hidden order."""
    order = list(range(n))
    rng.shuffle(order)
    topo = topo or random_topology(rng, nodes)
    u = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a):
            if rng.random() < 0.5:
                u[order[a]][order[b]] = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    return TdgInstance(tuple(map(tuple, u)), topo, random_factor(rng, topo))


def random_placement(rng: random.Random, instance) -> tuple:
    return tuple(rng.sample(range(instance.node_count), instance.n))


def cycle_friendship(n: int, m: int, topology: TopologyGraph, weight=1) -> TdgInstance:
    """Agents 0..m-1 form the friendship cycle i -> i+1; others have no friends."""
    return TdgInstance.from_sparse(n, {(i, (i + 1) % m): weight for i in range(m)}, topology)
