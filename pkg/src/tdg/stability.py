"""Beneficial deviations, stability checks and potential functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import TdgError, TdgInstance, friendship_graph, utility


@dataclass(frozen=True)
class Jump:
    agent: int
    target: int
    gain: Fraction


@dataclass(frozen=True)
class Swap:
    first: int
    second: int
    gains: tuple  # (gain of first, gain of second)


def _jump_candidates(instance: TdgInstance, placement):
    view = instance._scaled
    taken = set(placement)
    free = [v for v in range(instance.node_count) if v not in taken]
    for i in range(instance.n):
        if not view.rows[i]:
            continue
        here = view.value(placement, i)
        for v in free:
            gain = view.value_at(placement, i, v) - here
            if gain > 0:
                yield i, v, gain


def beneficial_jumps(instance: TdgInstance, placement) -> list:
    """All strictly improving jumps to empty nodes, by agent then node."""
    view = instance._scaled
    return [Jump(i, v, view.to_rational(g)) for i, v, g in _jump_candidates(instance, placement)]


def is_jump_stable(instance: TdgInstance, placement) -> bool:
    return next(_jump_candidates(instance, placement), None) is None


def _swap_gains(view, placement, i, j):
    # agent i evaluated from j's node with j moved onto i's node, and vice versa
    pi, pj = placement[i], placement[j]
    swapped = list(placement)
    swapped[i], swapped[j] = pj, pi
    gi = view.value(swapped, i) - view.value(placement, i)
    gj = view.value(swapped, j) - view.value(placement, j)
    return gi, gj


def _swap_candidates(instance: TdgInstance, placement):
    view = instance._scaled
    n = instance.n
    for i in range(n):
        if not view.rows[i]:
            continue
        for j in range(i + 1, n):
            if not view.rows[j]:
                continue
            gi, gj = _swap_gains(view, placement, i, j)
            if gi > 0 and gj > 0:
                yield i, j, gi, gj


def beneficial_swaps(instance: TdgInstance, placement) -> list:
    """Unordered pairs (i < j) where both agents strictly gain by swapping."""
    view = instance._scaled
    return [
        Swap(i, j, (view.to_rational(gi), view.to_rational(gj)))
        for i, j, gi, gj in _swap_candidates(instance, placement)
    ]


def is_swap_stable(instance: TdgInstance, placement) -> bool:
    return next(_swap_candidates(instance, placement), None) is None


def potential_phi(instance: TdgInstance, placement) -> Fraction:
    """Sum of all agents' utilities."""
    view = instance._scaled
    return view.to_rational(sum(view.value(placement, i) for i in range(instance.n)))


def potential_lambda_vec(instance: TdgInstance, placement, order=None) -> tuple:
    """Utilities listed in a friends-first topological order.

    ``order`` defaults to the lowest-index Kahn order.  A supplied order must
    put every agent after all of her friends.
    """
    graph = friendship_graph(instance)
    if order is None:
        order = graph.topological_order()
        if order is None:
            raise TdgError("no topological order")
    else:
        order = list(order)
        if sorted(order) != list(range(instance.n)):
            raise TdgError("order is not a permutation of the agents")
        rank = {a: k for k, a in enumerate(order)}
        if any(rank[i] <= rank[j] for i, j in graph.arcs):
            raise TdgError("no topological order")
    return tuple(utility(instance, placement, i) for i in order)
