"""Acceptance criteria 1-13.

Each test records PASS or FAIL for its criterion; the lines are printed at the
end of the pytest run (see ``conftest.py``) and when this file is executed
directly.
"""

import itertools
import random
from fractions import Fraction

import networkx as nx

from helpers import random_dag_nonnegative, random_factor, random_placement, random_rational, random_symmetric
from tdg import (
    BestGain,
    FirstDeviator,
    Scripted,
    SeededRandom,
    TdgInstance,
    TopologyGraph,
    explore_state_graph,
    is_jump_stable,
    is_swap_stable,
    jump,
    necessarily_converges,
    possibly_converges,
    potential_lambda_vec,
    potential_phi,
    run_dynamics,
    run_scripted_exponential,
    run_swap_dynamics,
    swap,
    utility,
)
from tdg.dynamics import CONVERGED, CYCLE, StateSpaceTooLarge
from tdg.gadgets import (
    X3cInstance,
    exponential_agent_index,
    gadget_cat_and_mouse,
    gadget_dynconv,
    gadget_dyncycle,
    gadget_exjump,
    gadget_roommates_no_swap,
    gadget_swap_cycle,
    gadget_tree_counterexample,
    pad_x3c_for_dynconv,
    padded_cover,
)
from tdg.oracle import correspondence_counterexample, exists_jump_stable, exists_swap_stable
from tdg.solvers import FOUND, NONEXISTENT, solve_acyclic, solve_cycle_on_cycle, solve_extended_star, solve_path
from tdg.stability import beneficial_swaps

RESULTS = {}

DESCRIPTIONS = {
    1: "symmetric convergence, increasing potential, doubling identity",
    2: "friends-first greedy soundness on random DAG instances",
    3: "cycle-on-cycle verdicts equal brute force",
    4: "tree counterexample has no jump stable assignment",
    5: "extended-star construction is stable",
    6: "path construction is stable",
    7: "exponential dynamics replay, a_k jumps >= 2^k",
    8: "lexicographic potential increases; acyclic state graphs",
    9: "jump-existence reduction witness at |R|=42, |S|=15",
    10: "convergence/cycling gadget scripts replay",
    11: "local-optimum correspondences (jump/Max-Cut, swap/partitioning)",
    12: "swap appendix: doubling, roommates, swap cycle",
    13: "cat-and-mouse non-existence on diameter >= 3 topologies",
}


def record(number, ok, note=""):
    RESULTS[number] = (ok, note)
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {DESCRIPTIONS[number]}"
    print(line + (f"  [{note}]" if note else ""))
    assert ok, note or DESCRIPTIONS[number]


POLICIES = (FirstDeviator(), BestGain(), SeededRandom(2024))


# --- 1 ----------------------------------------------------------------------


def test_criterion_01_symmetric_convergence():
    rng = random.Random(101)
    failures = []
    for k in range(200):
        inst = random_symmetric(rng, rng.randint(2, 6), rng.randint(6, 8))
        start = random_placement(rng, inst)
        for policy in POLICIES:
            tr = run_dynamics(inst, start, policy)
            phi = tr.phi_values
            ok = tr.outcome == CONVERGED and all(a < b for a, b in zip(phi, phi[1:]))
            # doubling identity at every step: delta phi == 2 * deviator's gain
            ok = ok and all(phi[s + 1] - phi[s] == 2 * step.gain for s, step in enumerate(tr.steps))
            if not ok:
                failures.append((k, type(policy).__name__))
    record(1, not failures, f"{len(failures)} failing runs" if failures else "200 instances x 3 policies")


# --- 2 ----------------------------------------------------------------------


def test_criterion_02_acyclic_greedy():
    rng = random.Random(202)
    bad = 0
    for _ in range(200):
        n = rng.randint(1, 7)
        inst = random_dag_nonnegative(rng, n, min(8, n + rng.randint(0, 2)))
        r = solve_acyclic(inst)
        ok = r.status == FOUND and is_jump_stable(inst, r.assignment) and exists_jump_stable(inst)[0]
        bad += not ok
    record(2, bad == 0, f"{bad} mismatches" if bad else "200 instances")


# --- 3 ----------------------------------------------------------------------


def _canonical(friend):
    """Isomorphism-invariant code of a partial function (out-degree <= 1 graph)."""
    n = len(friend)
    children = [[] for _ in range(n)]
    for i, f in enumerate(friend):
        if f is not None:
            children[f].append(i)
    on_cycle = set()
    for start in range(n):
        seen, i = [], start
        while i is not None and i not in seen:
            seen.append(i)
            i = friend[i]
        if i is not None:
            on_cycle.update(seen[seen.index(i):])

    def tree(v):
        return "(" + "".join(sorted(tree(c) for c in children[v] if c not in on_cycle)) + ")"

    comps, done = [], set()
    for v in range(n):
        if v in done:
            continue
        if v in on_cycle:
            cyc, i = [], v
            while i not in cyc:
                cyc.append(i)
                i = friend[i]
            done.update(cyc)
            codes = [tree(c) for c in cyc]
            comps.append("C" + min("".join(codes[r:] + codes[:r]) for r in range(len(codes))))
        elif friend[v] is None:
            comps.append("T" + tree(v))
    return "|".join(sorted(comps))


def _functional_graph_classes(n):
    reps = {}
    for choice in itertools.product(*[[None] + [j for j in range(n) if j != i] for i in range(n)]):
        reps.setdefault(_canonical(choice), choice)
    return list(reps.values())


def test_criterion_03_cycle_on_cycle():
    mismatches, checked = [], 0
    for n in range(2, 7):
        for friend in _functional_graph_classes(n):
            covering_short = False
            if all(f is not None for f in friend):
                order, i = [0], friend[0]
                while i != 0 and i not in order:
                    order.append(i)
                    i = friend[i]
                covering_short = i == 0 and len(order) == n and n in (3, 5)
            utils = {(i, f): 1 for i, f in enumerate(friend) if f is not None}
            for extra in (1, 2):
                inst = TdgInstance.from_sparse(n, utils, TopologyGraph.cycle(n + extra))
                report = solve_cycle_on_cycle(inst)
                exists = exists_jump_stable(inst)[0]
                checked += 1
                ok = (report.status == FOUND) == exists and (report.status == NONEXISTENT) == covering_short
                if not ok:
                    mismatches.append((friend, n + extra, report.status, exists))
    record(3, not mismatches, f"{len(mismatches)} mismatches of {checked}" if mismatches else
           f"{checked} (class, topology) pairs")


# --- 4 ----------------------------------------------------------------------


def test_criterion_04_tree_counterexample():
    inst = gadget_tree_counterexample().instance
    found, witness = exists_jump_stable(inst)
    record(4, not found and witness is None, "151200 assignments enumerated")


# --- 5 ----------------------------------------------------------------------


def _extended_star(sizes):
    edges, nxt = [], 1
    for size in sizes:
        prev = 0
        for _ in range(size):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return TopologyGraph(nxt, frozenset(edges))


def _random_cycle_instance(rng, n, topology):
    perm = list(range(n))
    rng.shuffle(perm)
    utils = {(perm[i], perm[(i + 1) % n]): Fraction(rng.randint(1, 5), rng.randint(1, 3)) for i in range(n)}
    return TdgInstance.from_sparse(n, utils, topology)


def test_criterion_05_extended_star():
    fig5 = TdgInstance.from_sparse(16, {(i, (i + 1) % 16): 1 for i in range(16)}, _extended_star([4, 6, 7]))
    r = solve_extended_star(fig5)
    ok = r.status == FOUND and is_jump_stable(fig5, r.assignment)
    rng = random.Random(505)
    configs = 0
    while configs < 20:
        k = rng.randint(3, 5)
        sizes = [rng.randint(1, 10) for _ in range(k)]
        nodes = 1 + sum(sizes)
        if nodes < 5 * k + 1:
            continue
        n = rng.randint(5 * k + 1, nodes)
        inst = _random_cycle_instance(rng, n, _extended_star(sizes))
        rep = solve_extended_star(inst)
        ok = ok and rep.status == FOUND and is_jump_stable(inst, rep.assignment)
        configs += 1
    record(5, ok, "16-agent worked layout + 20 random configurations")


# --- 6 ----------------------------------------------------------------------


def test_criterion_06_path():
    rng = random.Random(606)
    bad = 0
    for _ in range(100):
        n = rng.randint(2, 9)
        utils = {}
        for i in range(n):
            for j in rng.sample([j for j in range(n) if j != i], min(n - 1, rng.randint(0, 2))):
                utils[(i, j)] = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        inst = TdgInstance.from_sparse(n, utils, TopologyGraph.path(n + rng.randint(0, 4)))
        r = solve_path(inst)
        bad += not (r.status == FOUND and is_jump_stable(inst, r.assignment))
    record(6, bad == 0, f"{bad} failures" if bad else "100 instances")


# --- 7 ----------------------------------------------------------------------


def test_criterion_07_exponential():
    counts, ok = [], True
    for k in range(1, 11):
        tr = run_scripted_exponential(k)
        jumps = tr.jumps_by(exponential_agent_index("a", k))
        counts.append(jumps)
        ok = ok and jumps >= 2**k and all(s.gain > 0 for s in tr.steps)
    record(7, ok, f"a_10 jumps {counts[-1]}")


# --- 8 ----------------------------------------------------------------------


def test_criterion_08_lexicographic_potential():
    rng = random.Random(808)
    ok, explored = True, 0
    for t in range(100):
        n = rng.randint(2, 5)
        inst = random_dag_nonnegative(rng, n, rng.randint(n + 1, 7))
        for policy in (*POLICIES, SeededRandom(t)):
            tr = run_dynamics(inst, random_placement(rng, inst), policy)
            state, prev = tr.start, potential_lambda_vec(inst, tr.start)
            for step in tr.steps:
                state = jump(state, step.agent, step.target)
                cur = potential_lambda_vec(inst, state)
                ok = ok and cur > prev
                prev = cur
            ok = ok and tr.outcome == CONVERGED
        starts = list(itertools.permutations(range(inst.node_count), n))
        try:
            graph = explore_state_graph(inst, starts, state_limit=10**5)
        except StateSpaceTooLarge:
            continue
        explored += 1
        ok = ok and necessarily_converges(graph)
    record(8, ok and explored > 0, f"{explored} full state graphs explored")


# --- 9 ----------------------------------------------------------------------


def test_criterion_09_exjump_witness():
    r = 42
    sets = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(r // 3)] + [(0, 4, 8)]
    x = X3cInstance(r, tuple(sets))
    out = gadget_exjump(x, cover=list(range(r // 3)))
    inst = out.instance
    identity = 3 - (r - 3) * Fraction(1, 2) * Fraction(6, r - 3) == 0
    ok = x.s == 15 and inst.n == 58 and identity and is_jump_stable(inst, out.witness_assignment)
    record(9, ok, f"{inst.n} agents, {inst.node_count} nodes")


# --- 10 ---------------------------------------------------------------------


def _planted_yes_instances():
    yield X3cInstance(6, ((0, 1, 2), (3, 4, 5), (0, 3, 4), (1, 2, 5), (0, 1, 5))), [0, 1]
    yield X3cInstance(6, ((0, 3, 4), (0, 1, 2), (1, 2, 5), (3, 4, 5))), [1, 3]
    yield X3cInstance(9, ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8))), [0, 1, 2]
    small = X3cInstance(3, ((0, 1, 2),))
    padded = pad_x3c_for_dynconv(small)
    yield padded, padded_cover(small, padded, [0])


def test_criterion_10_dynamics_gadgets():
    ok, cases = True, 0
    for x, cover in _planted_yes_instances():
        if 3 * x.s > 2 * x.r:
            out = gadget_dynconv(x, cover=cover)
            tr = run_dynamics(out.instance, out.initial_assignment, Scripted(out.script))
            ok = ok and tr.outcome == CONVERGED and is_jump_stable(out.instance, tr.final)
        out = gadget_dyncycle(x, cover=cover)
        prefix = run_dynamics(out.instance, out.initial_assignment, Scripted(out.script), len(out.script))
        ok = ok and len(prefix.steps) == len(out.script) and all(s.gain > 0 for s in prefix.steps)
        tail = run_dynamics(out.instance, prefix.final, FirstDeviator())
        ok = ok and tail.outcome == CYCLE
        cases += 1
    record(10, ok, f"{cases} planted instances")


# --- 11 ---------------------------------------------------------------------


def _random_weights(rng, t):
    w = [[0] * t for _ in range(t)]
    for x, y in itertools.combinations(range(t), 2):
        w[x][y] = w[y][x] = rng.randint(-3, 3)
    return w


def test_criterion_11_local_optimum_correspondence():
    rng = random.Random(1111)
    jump_bad = sum(
        correspondence_counterexample(_random_weights(rng, rng.randint(2, 5)), "jump") is not None
        for _ in range(50)
    )
    swap_bad = sum(
        correspondence_counterexample(_random_weights(rng, 2 * rng.randint(1, 4)), "swap") is not None
        for _ in range(50)
    )
    note = f"jump: {50 - jump_bad}/50 hold; swap: {50 - swap_bad}/50 hold"
    record(11, jump_bad == 0 and swap_bad == 0, note)


# --- 12 ---------------------------------------------------------------------


def test_criterion_12_swap_appendix():
    rng = random.Random(1212)
    ok = True
    for _ in range(100):
        inst = random_symmetric(rng, rng.randint(2, 6), rng.randint(6, 8))
        p = random_placement(rng, inst)
        pairs = [(s.first, s.second) for s in beneficial_swaps(inst, p)]
        pairs += [tuple(rng.sample(range(inst.n), 2)) for _ in range(3)]
        for i, j in pairs:
            q = swap(p, i, j)
            delta = utility(inst, q, i) - utility(inst, p, i) + utility(inst, q, j) - utility(inst, p, j)
            ok = ok and potential_phi(inst, q) - potential_phi(inst, p) == 2 * delta
    ok = ok and exists_swap_stable(gadget_roommates_no_swap().instance) == (False, None)
    cyc = gadget_swap_cycle()
    for policy in POLICIES:
        tr = run_swap_dynamics(cyc.instance, cyc.initial_assignment, policy, max_steps=64)
        ok = ok and tr.outcome == CYCLE
    graph = explore_state_graph(cyc.instance, cyc.initial_assignment, kind="swap")
    ok = ok and not possibly_converges(graph)
    ok = ok and is_swap_stable(cyc.instance, cyc.witness_assignment)
    record(12, ok)


# --- 13 ---------------------------------------------------------------------


def test_criterion_13_cat_and_mouse():
    ok, count = True, 0
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() < 2 or not nx.is_connected(g) or nx.diameter(g) < 3:
            continue
        topo = TopologyGraph(g.number_of_nodes(), frozenset(g.edges()))
        ok = ok and exists_jump_stable(gadget_cat_and_mouse(topo).instance) == (False, None)
        count += 1
    star = TdgInstance(((0, 1), (-1, 0)), TopologyGraph.star(5))
    found, witness = exists_jump_stable(star)
    ok = ok and found and is_jump_stable(star, witness)
    record(13, ok, f"{count} topologies with diameter >= 3; star exists")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
