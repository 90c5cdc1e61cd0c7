"""Constructive polynomial-time solvers for jump stable assignments.

Every solver returns a :class:`SolverReport`.  A report that carries an
assignment has already been run through :func:`is_jump_stable`; a failed
verification raises instead of returning a bad answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import TdgInstance, friendship_graph
from .stability import is_jump_stable

FOUND = "found"
NONEXISTENT = "nonexistent"
NOT_APPLICABLE = "not_applicable"


class SolverError(RuntimeError):
    """A construction produced an assignment that is not jump stable."""


@dataclass(frozen=True)
class SolverReport:
    status: str
    method: str
    checks: tuple = ()  # ((name, passed), ...) in evaluation order
    assignment: tuple | None = None
    details: dict = field(default_factory=dict)

    @property
    def failed_check(self):
        return next((name for name, ok in self.checks if not ok), None)


def _report(instance, method, checks, assignment, **details) -> SolverReport:
    assignment = tuple(assignment)
    if not is_jump_stable(instance, assignment):
        raise SolverError(f"{method} produced an unstable assignment {assignment}")
    return SolverReport(FOUND, method, tuple(checks), assignment, details)


def _gate(method, checks) -> SolverReport | None:
    if all(ok for _, ok in checks):
        return None
    return SolverReport(NOT_APPLICABLE, method, tuple(checks))


def _place_greedily(instance, partial: dict, agents, free: list):
    """Put each agent on the free node that is best against already placed agents.

    Ties go to the lowest node index.  ``free`` must be sorted and is consumed.
    """
    view = instance._scaled
    for i in agents:
        row = [(j, w) for j, w in view.rows[i] if j in partial]
        best, best_val = None, None
        for v in free:
            frow = view.factor[v]
            val = sum(frow[partial[j]] * w for j, w in row)
            if best is None or val > best_val:
                best, best_val = v, val
        partial[i] = best
        free.remove(best)
    return partial


def solve_acyclic(instance: TdgInstance) -> SolverReport:
    """Place agents friends-first, each on her best empty node."""
    method = "acyclic"
    graph = friendship_graph(instance)
    order = graph.topological_order()
    checks = [
        ("friendship graph acyclic", order is not None),
        ("utilities non-negative", instance.is_nonnegative()),
    ]
    gated = _gate(method, checks)
    if gated:
        return gated
    partial = _place_greedily(instance, {}, order, list(range(instance.node_count)))
    placement = [partial[i] for i in range(instance.n)]
    return _report(instance, method, checks, placement, order=tuple(order))


# --- cycle topology ---------------------------------------------------------


def _cycle_walk(topology):
    """Nodes of a cycle graph in walking order from node 0, or ``None``."""
    n = topology.node_count
    if n < 3 or len(topology.edges) != n or not topology.is_connected():
        return None
    if any(topology.degree(v) != 2 for v in range(n)):
        return None
    walk = [0, topology.adjacency[0][0]]
    while len(walk) < n:
        a, b = topology.adjacency[walk[-1]]
        walk.append(a if a != walk[-2] else b)
    return walk


def _single_friend_map(instance):
    """``friend[i]`` (or ``None``) when each agent likes at most one agent and
    is indifferent to the rest; ``None`` overall otherwise."""
    friend = []
    for row in instance.utilities:
        pos = [j for j, x in enumerate(row) if x > 0]
        if len(pos) > 1 or any(x < 0 for x in row):
            return None
        friend.append(pos[0] if pos else None)
    return friend


def _friend_cycles(friend):
    """Directed cycles of a partial function, each rotated to start at its
    lowest agent, sorted by that agent."""
    cycles, seen = [], set()
    for start in range(len(friend)):
        path, pos = [], {}
        i = start
        while i is not None and i not in seen and i not in pos:
            pos[i] = len(path)
            path.append(i)
            i = friend[i]
        if i is not None and i in pos:
            cyc = path[pos[i]:]
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        seen.update(path)
    return sorted(cycles)


def long_cycle_pattern(m: int) -> list:
    """Positions (0-based offsets) for labels 1..m of a friendship cycle of
    length m not in {3, 5}; label i likes label i+1."""
    if m in (3, 5) or m < 2:
        raise ValueError(f"no long-cycle pattern for length {m}")
    pos = {}
    if m % 2 == 0:
        h = m // 2
        for i in range(1, m + 1):
            pos[i] = h - i + 1 if i <= h else i
    else:
        h = m // 2
        for i in range(1, m + 1):
            if i <= h:
                pos[i] = 2 * i - 1
            elif i == h + 1:
                pos[i] = m - 1
            elif i == h + 2:
                pos[i] = m
            else:
                pos[i] = 2 * (m + 1 - i)
    return [pos[i] - 1 for i in range(1, m + 1)]


# node offsets c_1..c_m for labels 1..m; the helper agent sits at offset m
SHORT_CYCLE_PATTERNS = {
    3: [2, 1, 0],  # c1..c4 = 3, 2, 1, a
    5: [0, 2, 4, 3, 1],  # c1..c6 = 1, 5, 2, 4, 3, a
}
# label that sits next to the helper node
SHORT_CYCLE_EDGE_LABEL = {3: 1, 5: 3}


def solve_cycle_on_cycle(instance: TdgInstance) -> SolverReport:
    """Cycle topology, each agent with at most one friend.

    No stable assignment exists exactly when the friendship graph is one 3- or
    5-cycle over all agents (and there is an empty node).  Otherwise cycles are
    laid out one after another around the topology, then the acyclic rest is
    placed greedily.
    """
    method = "cycle"
    walk = _cycle_walk(instance.topology)
    friend = _single_friend_map(instance)
    checks = [
        ("topology is a cycle", walk is not None),
        ("at most one friend, zero elsewhere", friend is not None),
    ]
    gated = _gate(method, checks)
    if gated:
        return gated
    n, size = instance.n, instance.node_count
    cycles = _friend_cycles(friend)
    if size == n:
        return _report(instance, method, checks, [walk[i] for i in range(n)])
    if len(cycles) == 1 and len(cycles[0]) in (3, 5) and len(cycles[0]) == n:
        return SolverReport(NONEXISTENT, method, tuple(checks))

    slot = {}  # agent -> offset along the walk
    on_cycle = {i for cyc in cycles for i in cyc}
    rest = [i for i in range(n) if i not in on_cycle]
    cursor = 0

    def put_long(cyc, start):
        for label, off in enumerate(long_cycle_pattern(len(cyc))):
            slot[cyc[label]] = start + off

    def put_short_reversed(cyc, start):
        # helper node sits just before ``start``; pattern runs away from it
        m = len(cyc)
        for label, off in enumerate(SHORT_CYCLE_PATTERNS[m]):
            slot[cyc[label]] = start + (m - 1 - off)

    if len(cycles) == 1 and len(cycles[0]) in (3, 5):
        cyc = cycles[0]
        m = len(cyc)
        helper = next(a for a in rest if friend[a] is None or friend[a] in on_cycle)
        if friend[helper] is not None:
            # rotate labels so the helper's friend sits next to her
            k = cyc.index(friend[helper])
            shift = (k - (SHORT_CYCLE_EDGE_LABEL[m] - 1)) % m
            cyc = cyc[shift:] + cyc[:shift]
        slot[helper] = 0
        put_short_reversed(cyc, 1)
        cursor = m + 1
        rest.remove(helper)
    else:
        for idx, cyc in enumerate(cycles):
            m = len(cyc)
            if m not in (3, 5):
                put_long(cyc, cursor)
            elif idx == 0:
                # forward layout; the next cycle occupies the helper node
                for label, off in enumerate(SHORT_CYCLE_PATTERNS[m]):
                    slot[cyc[label]] = cursor + off
            else:
                put_short_reversed(cyc, cursor)
            cursor += m

    partial = {a: walk[off] for a, off in slot.items()}
    order = _acyclic_rest_order(friend, rest)
    free = sorted(set(range(size)) - set(partial.values()))
    _place_greedily(instance, partial, order, free)
    placement = [partial[i] for i in range(n)]
    return _report(instance, method, checks, placement, cycles=tuple(map(tuple, cycles)))


def _acyclic_rest_order(friend, rest):
    """Order the off-cycle agents so each follows her friend (if off-cycle)."""
    rest_set = set(rest)
    order, done = [], set()

    def visit(a):
        chain = []
        while a in rest_set and a not in done:
            chain.append(a)
            a = friend[a]
            if a is None:
                break
        for b in reversed(chain):
            if b not in done:
                done.add(b)
                order.append(b)

    for a in sorted(rest):
        visit(a)
    return order


# --- path topology ----------------------------------------------------------


def _path_walk(topology):
    """Nodes of a path graph from its lower-index end, or ``None``."""
    n = topology.node_count
    if n == 1:
        return [0]
    if len(topology.edges) != n - 1 or not topology.is_connected():
        return None
    ends = [v for v in range(n) if topology.degree(v) == 1]
    if len(ends) != 2 or any(topology.degree(v) > 2 for v in range(n)):
        return None
    walk, prev = [ends[0]], None
    while len(walk) < n:
        nxt = [w for w in topology.adjacency[walk[-1]] if w != prev]
        prev = walk[-1]
        walk.append(nxt[0])
    return walk


def solve_path(instance: TdgInstance) -> SolverReport:
    """Left-to-right greedy: each node goes to the best unplaced friend of the
    agent on the previous node, else to the lowest unplaced agent."""
    method = "path"
    walk = _path_walk(instance.topology)
    checks = [
        ("topology is a path", walk is not None),
        ("utilities non-negative", instance.is_nonnegative()),
        ("at most two friends each", all(len(instance.friends(i)) <= 2 for i in range(instance.n))),
    ]
    gated = _gate(method, checks)
    if gated:
        return gated
    n = instance.n
    unplaced = set(range(n))
    sequence = [0]
    unplaced.discard(0)
    while unplaced:
        prev = sequence[-1]
        row = instance.utilities[prev]
        options = [j for j in instance.friends(prev) if j in unplaced]
        if options:
            nxt = max(options, key=lambda j: (row[j], -j))
        else:
            nxt = min(unplaced)
        sequence.append(nxt)
        unplaced.discard(nxt)
    placement = [0] * n
    for k, agent in enumerate(sequence):
        placement[agent] = walk[k]
    return _report(instance, method, checks, placement)


# --- extended star topology -------------------------------------------------


def _star_branches(topology):
    """``(center, branches)`` of an extended star; each branch lists its nodes
    from the center outwards, branches ordered by first node.  ``None`` if the
    graph is not an extended star."""
    n = topology.node_count
    if len(topology.edges) != n - 1 or not topology.is_connected():
        return None
    hubs = [v for v in range(n) if topology.degree(v) >= 3]
    if len(hubs) != 1:
        return None
    center = hubs[0]
    branches = []
    for first in topology.adjacency[center]:
        branch, prev = [first], center
        while True:
            nxt = [w for w in topology.adjacency[branch[-1]] if w != prev]
            if not nxt:
                break
            prev = branch[-1]
            branch.append(nxt[0])
        branches.append(branch)
    return center, branches


def _single_cycle_order(instance):
    """Agents along the friendship cycle starting at agent 0, if the friendship
    graph is one directed cycle through everybody."""
    friend = _single_friend_map(instance)
    if friend is None or any(f is None for f in friend):
        return None
    order, i = [], 0
    while i not in order:
        order.append(i)
        i = friend[i]
    return order if len(order) == instance.n and i == 0 else None


def _fill_long_branch(count: int) -> list:
    """Offsets from the center (0 = adjacent) for ``count`` consecutive agents."""
    s = count // 2
    if count % 2 == 0:
        first = [2 * t for t in range(s)]
        second = [2 * s - 1 - 2 * t for t in range(s)]
    else:
        first = [2 * t + 1 for t in range(s)]
        second = [2 * s - 2 * t for t in range(s + 1)]
    return first + second


def solve_extended_star(instance: TdgInstance) -> SolverReport:
    """Fill short branches leaf-first, long branches with the interleaved
    pattern, and finish with the center."""
    method = "star"
    shape = _star_branches(instance.topology)
    cycle = _single_cycle_order(instance)
    k = len(shape[1]) if shape else 0
    checks = [
        ("topology is an extended star", shape is not None),
        ("at least three branches", k >= 3),
        ("n >= 5k+1", shape is not None and instance.n >= 5 * k + 1),
        ("utilities non-negative", instance.is_nonnegative()),
        ("friendship graph is one cycle", cycle is not None),
    ]
    gated = _gate(method, checks)
    if gated:
        return gated
    center, branches = shape
    short = [b for b in branches if len(b) <= 4]
    long_ = [b for b in branches if len(b) >= 5]
    pool = instance.n - 1 - sum(len(b) for b in short)
    counts = [5] * len(long_)
    pool -= 5 * len(long_)
    while pool > 0:
        # smallest share first; ties go to the later branch
        open_ = [t for t in range(len(long_)) if counts[t] < len(long_[t])]
        t = min(open_, key=lambda t: (counts[t], -t))
        counts[t] += 1
        pool -= 1

    nodes = []
    for b in short:
        nodes.extend(reversed(b))
    for b, count in zip(long_, counts):
        nodes.extend(b[off] for off in _fill_long_branch(count))
    nodes.append(center)
    placement = [0] * instance.n
    for agent, v in zip(cycle, nodes):
        placement[agent] = v
    return _report(
        instance, method, checks, placement, cycle_order=tuple(cycle), branch_counts=tuple(counts)
    )
