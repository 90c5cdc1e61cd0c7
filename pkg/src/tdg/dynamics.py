"""Beneficial-jump and beneficial-swap dynamics, plus exact state-space analysis.

A run applies one deviation at a time, chosen by a scheduler policy, and stops
when no beneficial deviation is left (``converged``), when the current state
was seen before (``cycle``), when the step budget is spent (``step_limit``),
or, for scripted runs, when the script ends in an unstable state
(``script_exhausted``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .core import TdgError, TdgInstance, check_assignment, jump, swap
from .stability import Jump, Swap, _swap_gains, beneficial_jumps, beneficial_swaps, potential_phi

DEFAULT_MAX_STEPS = 10**6
DEFAULT_STATE_LIMIT = 10**7

CONVERGED = "converged"
CYCLE = "cycle"
STEP_LIMIT = "step_limit"
SCRIPT_EXHAUSTED = "script_exhausted"


class DynamicsError(TdgError):
    pass


class StateSpaceTooLarge(DynamicsError):
    def __init__(self, limit):
        super().__init__("state space too large")
        self.limit = limit


@dataclass(frozen=True)
class FirstDeviator:
    """Take the first beneficial move in (agent, node) order."""


@dataclass(frozen=True)
class BestGain:
    """Take the move with the largest gain; ties go to the earliest move.

    For swaps the gain is the sum of both agents' gains.
    """


@dataclass(frozen=True)
class Scripted:
    steps: tuple  # (agent, node) for jumps, (agent, agent) for swaps


@dataclass(frozen=True)
class SeededRandom:
    seed: int = 0


POLICIES = {
    "first": FirstDeviator,
    "best": BestGain,
    "random": SeededRandom,
    "scripted": Scripted,
}


@dataclass(frozen=True)
class Step:
    agent: int
    source: int
    target: int
    gain: Fraction


@dataclass(frozen=True)
class SwapStep:
    first: int
    second: int
    gains: tuple


@dataclass
class DynamicsTrace:
    start: tuple
    steps: list = field(default_factory=list)
    outcome: str = ""
    final: tuple = ()
    cycle_start: int | None = None  # step index after which the repeated state first held
    phi_values: list | None = None

    @property
    def cycle_length(self) -> int | None:
        if self.cycle_start is None:
            return None
        return len(self.steps) - self.cycle_start

    def jumps_by(self, agent: int) -> int:
        return sum(1 for s in self.steps if getattr(s, "agent", None) == agent)


def _moves(instance, placement, kind):
    if kind == "jump":
        return beneficial_jumps(instance, placement)
    return beneficial_swaps(instance, placement)


def _gain_key(move):
    return move.gain if hasattr(move, "gain") else sum(move.gains)


def _run(instance, start, policy, max_steps, kind):
    state = check_assignment(instance, start)
    trace = DynamicsTrace(start=state)
    if instance.is_symmetric():
        trace.phi_values = [potential_phi(instance, state)]
    rng = random.Random(policy.seed) if isinstance(policy, SeededRandom) else None
    seen = {state: 0}
    scripted = isinstance(policy, Scripted)
    while True:
        idx = len(trace.steps)
        # a scripted move is checked on its own; the full move list is only
        # needed once the script has run out
        if scripted and idx < len(policy.steps) and idx < max_steps:
            move = _scripted_move(instance, state, policy.steps[idx], idx, kind)
            moves = None
        else:
            moves = _moves(instance, state, kind)
            if not moves:
                trace.outcome = CONVERGED
                break
            if idx >= max_steps:
                trace.outcome = STEP_LIMIT
                break
        if scripted:
            if moves is not None:
                trace.outcome = SCRIPT_EXHAUSTED
                break
        elif isinstance(policy, BestGain):
            move = max(moves, key=_gain_key)  # max keeps the first among equals
        elif rng is not None:
            move = rng.choice(moves)
        else:
            move = moves[0]

        if kind == "jump":
            trace.steps.append(Step(move.agent, state[move.agent], move.target, move.gain))
            state = jump(state, move.agent, move.target)
        else:
            trace.steps.append(SwapStep(move.first, move.second, move.gains))
            state = swap(state, move.first, move.second)
        if trace.phi_values is not None:
            trace.phi_values.append(potential_phi(instance, state))
        if state in seen:
            trace.outcome = CYCLE
            trace.cycle_start = seen[state]
            break
        seen[state] = len(trace.steps)
    trace.final = state
    return trace


def _scripted_move(instance, state, step, idx, kind):
    a, b = step
    view = instance._scaled
    try:
        if kind == "jump":
            if not 0 <= a < instance.n or not 0 <= b < instance.node_count or b in state:
                raise IndexError
            gain = view.value_at(state, a, b) - view.value(state, a)
            if gain > 0:
                return Jump(a, b, view.to_rational(gain))
        else:
            if not 0 <= a < instance.n or not 0 <= b < instance.n or a == b:
                raise IndexError
            first, second = min(a, b), max(a, b)
            gains = _swap_gains(view, state, first, second)
            if gains[0] > 0 and gains[1] > 0:
                return Swap(first, second, tuple(view.to_rational(g) for g in gains))
    except IndexError:
        raise DynamicsError(f"script step {idx} {tuple(step)} is not a valid {kind}") from None
    raise DynamicsError(f"script step {idx} {tuple(step)} is not a beneficial {kind}")


def run_dynamics(instance: TdgInstance, start, policy=None, max_steps: int = DEFAULT_MAX_STEPS):
    """Apply beneficial jumps until convergence, a repeated state, or the limit."""
    return _run(instance, start, policy or FirstDeviator(), max_steps, "jump")


def run_swap_dynamics(instance: TdgInstance, start, policy=None, max_steps: int = DEFAULT_MAX_STEPS):
    """As :func:`run_dynamics`, with beneficial swaps as the moves."""
    return _run(instance, start, policy or FirstDeviator(), max_steps, "swap")


MAX_EXPONENTIAL_K = 14


def run_scripted_exponential(k: int) -> DynamicsTrace:
    """Replay the exponential-length jump script on H_k."""
    from .gadgets import gadget_exponential_family

    if not 1 <= k <= MAX_EXPONENTIAL_K:
        raise DynamicsError(f"k must lie in 1..{MAX_EXPONENTIAL_K}")
    out = gadget_exponential_family(k)
    return run_dynamics(out.instance, out.initial_assignment, Scripted(out.script), len(out.script))


@dataclass
class StateGraph:
    states: list
    edges: list  # edges[s] = sorted successor indices
    stable: list
    index: dict = field(repr=False, default_factory=dict)


def explore_state_graph(
    instance: TdgInstance, starts, state_limit: int = DEFAULT_STATE_LIMIT, kind: str = "jump"
) -> StateGraph:
    """Every assignment reachable from ``starts`` by beneficial moves.

    ``starts`` is one assignment or an iterable of assignments.
    """
    starts = list(starts)
    if starts and isinstance(starts[0], int):
        starts = [starts]
    graph = StateGraph([], [], [])
    frontier = []

    def add(state):
        if state not in graph.index:
            if len(graph.states) >= state_limit:
                raise StateSpaceTooLarge(state_limit)
            graph.index[state] = len(graph.states)
            graph.states.append(state)
            graph.edges.append([])
            graph.stable.append(False)
            frontier.append(state)
        return graph.index[state]

    for s in starts:
        add(check_assignment(instance, s))
    while frontier:
        state = frontier.pop()
        here = graph.index[state]
        moves = _moves(instance, state, kind)
        graph.stable[here] = not moves
        succ = set()
        for move in moves:
            if kind == "jump":
                nxt = jump(state, move.agent, move.target)
            else:
                nxt = swap(state, move.first, move.second)
            succ.add(add(nxt))
        graph.edges[here] = sorted(succ)
    return graph


def possibly_converges(graph: StateGraph) -> bool:
    return any(graph.stable)


def necessarily_converges(graph: StateGraph) -> bool:
    """True iff the explored graph has no directed cycle."""
    n = len(graph.states)
    indegree = [0] * n
    for succ in graph.edges:
        for t in succ:
            indegree[t] += 1
    ready = [s for s in range(n) if indegree[s] == 0]
    removed = 0
    while ready:
        s = ready.pop()
        removed += 1
        for t in graph.edges[s]:
            indegree[t] -= 1
            if indegree[t] == 0:
                ready.append(t)
    return removed == n
