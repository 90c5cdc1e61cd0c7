"""Exhaustive ground truth for small instances.

Enumeration is deliberately naive: every injective placement is generated in
lexicographic order and handed to the stability checker.  No pruning beyond
injectivity, no symmetry reduction.
"""

from __future__ import annotations

import itertools
import math
import os

from .core import TdgInstance
from .stability import is_jump_stable, is_swap_stable

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"{count} assignments exceed the budget of {budget}")
        self.count = count
        self.budget = budget


def default_budget() -> int:
    value = os.environ.get("TDG_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


def assignment_count(instance: TdgInstance) -> int:
    return math.perm(instance.node_count, instance.n)


def all_assignments(instance: TdgInstance, budget: int | None = None):
    budget = default_budget() if budget is None else budget
    count = assignment_count(instance)
    if count > budget:
        raise BudgetExceeded(count, budget)
    return itertools.permutations(range(instance.node_count), instance.n)


def exists_jump_stable(instance: TdgInstance, budget: int | None = None):
    """``(True, witness)`` for the lexicographically first jump stable
    assignment, or ``(False, None)``."""
    for placement in all_assignments(instance, budget):
        if is_jump_stable(instance, placement):
            return True, placement
    return False, None


def exists_swap_stable(instance: TdgInstance, budget: int | None = None):
    for placement in all_assignments(instance, budget):
        if is_swap_stable(instance, placement):
            return True, placement
    return False, None


def _cut_weight(weights, side) -> int:
    t = len(side)
    return sum(weights[x][y] for x in range(t) for y in range(x + 1, t) if side[x] != side[y])


def _flip_locally_optimal(weights, side) -> bool:
    base = _cut_weight(weights, side)
    for x in range(len(side)):
        flipped = list(side)
        flipped[x] = 1 - flipped[x]
        if _cut_weight(weights, flipped) > base:
            return False
    return True


def _swap_locally_optimal(weights, side) -> bool:
    base = _cut_weight(weights, side)
    for x in range(len(side)):
        for y in range(len(side)):
            if side[x] == 0 and side[y] == 1:
                moved = list(side)
                moved[x], moved[y] = 1, 0
                if _cut_weight(weights, moved) < base:
                    return False
    return True


def correspondence_counterexample(weights, notion: str = "jump", budget: int | None = None):
    """First assignment where stability and local optimality of the induced
    partition disagree, as ``(placement, stable, locally_optimal)``; ``None``
    if they agree everywhere.

    ``notion="jump"`` checks jump stability against Max-Cut under single-vertex
    flips; ``notion="swap"`` checks swap stability against balanced Graph
    Partitioning under swaps.
    """
    from . import gadgets

    if notion == "jump":
        out = gadgets.gadget_maxcut_reduction(weights)
        stable_fn, local_fn = is_jump_stable, _flip_locally_optimal
    elif notion == "swap":
        out = gadgets.gadget_graph_partitioning_reduction(weights)
        stable_fn, local_fn = is_swap_stable, _swap_locally_optimal
    else:
        raise ValueError(f"unknown notion {notion!r}")
    instance = out.instance
    half = instance.node_count // 2
    w = out.metadata["weights"]
    cache = {}
    for placement in all_assignments(instance, budget):
        side = tuple(0 if v < half else 1 for v in placement)
        if side not in cache:
            cache[side] = local_fn(w, side)
        stable = stable_fn(instance, placement)
        if stable != cache[side]:
            return placement, stable, cache[side]
    return None


def verify_local_optimum_correspondence(weights, budget: int | None = None, notion: str = "jump") -> bool:
    return correspondence_counterexample(weights, notion, budget) is None
