"""Constructors for the named instance families.

Each constructor returns a :class:`GadgetOutput`.  Agent roles and component
boundaries are recorded in ``metadata`` (``labels`` names every agent,
``node_labels`` every node).  Where a construction needs an exact 3-cover to
produce a witness or a jump script, the cover is passed in explicitly as a
list of set indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import DistanceFactor, TdgError, TdgInstance, TopologyGraph, as_rational, factor_at


class GadgetError(TdgError):
    """A gadget precondition failed."""


@dataclass(frozen=True)
class X3cInstance:
    """Exact 3-Cover: ground set ``0..ground_set_size-1`` and 3-element sets."""

    ground_set_size: int
    sets: tuple
    flags: tuple = ()

    def __post_init__(self):
        if self.ground_set_size % 3:
            raise GadgetError("ground set size must be a multiple of 3")
        norm = []
        for s in self.sets:
            s = tuple(sorted(s))
            if len(set(s)) != 3 or not all(0 <= r < self.ground_set_size for r in s):
                raise GadgetError(f"bad 3-set {s}")
            norm.append(s)
        object.__setattr__(self, "sets", tuple(norm))

    @property
    def r(self) -> int:
        return self.ground_set_size

    @property
    def s(self) -> int:
        return len(self.sets)

    def is_cover(self, cover) -> bool:
        cover = list(cover)
        covered = [r for idx in cover for r in self.sets[idx]]
        return len(cover) * 3 == self.r and sorted(covered) == list(range(self.r))


@dataclass(frozen=True)
class GadgetOutput:
    instance: TdgInstance
    initial_assignment: tuple | None = None
    witness_assignment: tuple | None = None
    script: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("initial_assignment", "witness_assignment"):
            value = getattr(self, name)
            if value is not None and len(value) != self.instance.n:
                raise GadgetError(f"{name} has wrong length")
        if self.script:
            for step in self.script:
                if not 0 <= step[0] < self.instance.n:
                    raise GadgetError(f"script step {step} names an unknown agent")


class _Builder:
    """Named agents and nodes, utilities keyed by name."""

    def __init__(self):
        self.agents, self.nodes = [], []
        self.agent_ix, self.node_ix = {}, {}
        self.edges = set()
        self.utils = {}

    def agent(self, name):
        self.agent_ix[name] = len(self.agents)
        self.agents.append(name)

    def node(self, name):
        self.node_ix[name] = len(self.nodes)
        self.nodes.append(name)

    def edge(self, a, b):
        self.edges.add((self.node_ix[a], self.node_ix[b]))

    def clique(self, names):
        for a, b in itertools.combinations(names, 2):
            self.edge(a, b)

    def like(self, i, j, value):
        self.utils[(self.agent_ix[i], self.agent_ix[j])] = as_rational(value)

    def instance(self, factor):
        topo = TopologyGraph(len(self.nodes), frozenset(self.edges))
        return TdgInstance.from_sparse(len(self.agents), self.utils, topo, factor)

    def placement(self, mapping):
        return tuple(self.node_ix[mapping[a]] for a in self.agents)

    def steps(self, pairs):
        return tuple((self.agent_ix[a], self.node_ix[v]) for a, v in pairs)


def _meta(builder, **extra):
    return {
        "labels": [_label(a) for a in builder.agents],
        "node_labels": list(builder.nodes),
        **extra,
    }


# --- counterexamples ------------------------------------------------------


def gadget_cat_and_mouse(topology: TopologyGraph, factor: DistanceFactor | None = None) -> GadgetOutput:
    """Two agents: the cat likes the mouse, the mouse dislikes the cat."""
    if not topology.is_connected():
        raise GadgetError("topology must be connected")
    if topology.diameter() < 3:
        raise GadgetError("diameter too small")
    utils = {(0, 1): 1, (1, 0): -1}
    inst = TdgInstance.from_sparse(2, utils, topology, factor)
    return GadgetOutput(inst, metadata={"labels": ["cat", "mouse"]})


TREE_BRANCH_LENGTH = 3


def gadget_tree_counterexample(factor: DistanceFactor | None = None) -> GadgetOutput:
    """Six agents in a friendship 6-cycle on a three-branch tree of 10 nodes."""
    b = _Builder()
    b.node("z")
    for x in "abc":
        for k in range(1, TREE_BRANCH_LENGTH + 1):
            b.node(f"{x}{k}")
            b.edge(f"{x}{k}", "z" if k == 1 else f"{x}{k - 1}")
    for i in range(1, 7):
        b.agent(i)
    for i in range(1, 7):
        b.like(i, i % 6 + 1, 1)
    return GadgetOutput(b.instance(factor), metadata=_meta(b))


def gadget_roommates_no_swap(factor: DistanceFactor | None = None) -> GadgetOutput:
    table = [
        [0, 3, 2, 1],
        [2, 0, 1, 3],
        [3, 1, 0, 2],
        [1, 2, 3, 0],
    ]
    topo = TopologyGraph(4, frozenset({(0, 1), (2, 3)}))
    inst = TdgInstance(tuple(map(tuple, table)), topo, factor or DistanceFactor.reciprocal())
    return GadgetOutput(inst, metadata={"labels": [1, 2, 3, 4]})


def gadget_swap_cycle(factor: DistanceFactor | None = None) -> GadgetOutput:
    """a1..a3 and b1..b3 on a 6-cycle; each likes the next of her own letter."""
    names = ["a1", "a2", "a3", "b1", "b2", "b3"]
    utils = {}
    for base in (0, 3):
        for k in range(3):
            utils[(base + k, base + (k + 1) % 3)] = 1
    inst = TdgInstance.from_sparse(6, utils, TopologyGraph.cycle(6), factor)
    initial = (0, 1, 2, 3, 4, 5)
    witness = (0, 1, 2, 5, 4, 3)
    return GadgetOutput(inst, initial, witness, metadata={"labels": names})


# --- exponential dynamics ---------------------------------------------------


def exponential_agent_index(role: str, j: int) -> int:
    """Agent index of ``a_j`` (j >= 0) or ``b_j`` (j >= 1)."""
    if role == "a":
        return 0 if j == 0 else 2 * j - 1
    return 2 * j


def gadget_exponential_family(k: int, factor: DistanceFactor | None = None) -> GadgetOutput:
    """Hedonic game H_k embedded as n cliques of size n, with a long jump script.

    a_j values b_j at 1 and a_{j-1} at 2; everything else is 0.  Starting from
    singletons, the script makes a_k jump 2^k times.
    """
    if k < 1:
        raise GadgetError("k must be at least 1")
    n = 2 * k + 1
    a = lambda j: exponential_agent_index("a", j)  # noqa: E731
    bb = lambda j: exponential_agent_index("b", j)  # noqa: E731
    utils = {}
    for j in range(1, k + 1):
        utils[(a(j), bb(j))] = 1
        utils[(a(j), a(j - 1))] = 2
    topo = TopologyGraph.disjoint_union(*[TopologyGraph.complete(n) for _ in range(n)])
    inst = TdgInstance.from_sparse(n, utils, topo, factor)
    initial = tuple(i * n for i in range(n))

    # coalition-level script: (agent, agent whose clique she joins)
    moves = [(a(1), bb(1)), (a(1), a(0))]
    for j in range(1, k):
        extended = []
        for mover, host in moves:
            extended.append((mover, host))
            if mover == a(j):
                extended.append((a(j + 1), bb(j + 1)))
                extended.append((a(j + 1), a(j)))
        moves = extended

    placement = list(initial)
    script = []
    for mover, host in moves:
        clique = placement[host] // n
        taken = set(placement)
        target = next(v for v in range(clique * n, clique * n + n) if v not in taken)
        script.append((mover, target))
        placement[mover] = target
    labels = ["a0"] + [f"{r}{j}" for j in range(1, k + 1) for r in "ab"]
    return GadgetOutput(inst, initial, None, tuple(script), {"labels": labels, "k": k})


# --- Exact 3-Cover reductions -----------------------------------------------


def exjump_bounds(r: int, s: int) -> dict:
    """The three size conditions the jump-existence reduction relies on."""
    return {
        "|R| > 3": r > 3,
        "3|S| > |R|": 3 * s > r,
        "|R| > 3|S| - |R|/3 + 10": Fraction(r) > 3 * s - Fraction(r, 3) + 10,
    }


def pad_x3c_for_exjump(x: X3cInstance) -> X3cInstance:
    """Add the fewest disjoint fresh triples that make every size bound hold.

    Padding cannot repair ``3|S| <= |R|``; such inputs come back flagged
    (``trivial-no`` when ``3|S| < |R|``, ``exact-size`` when equal).
    """
    k = 0
    while True:
        r, s = x.r + 3 * k, x.s + k
        bounds = exjump_bounds(r, s)
        if bounds["|R| > 3"] and bounds["|R| > 3|S| - |R|/3 + 10"]:
            break
        k += 1
    fresh = tuple((x.r + 3 * i, x.r + 3 * i + 1, x.r + 3 * i + 2) for i in range(k))
    flags = list(x.flags)
    if 3 * x.s < x.r:
        flags.append("trivial-no")
    elif 3 * x.s == x.r:
        flags.append("exact-size")
    return X3cInstance(x.r + 3 * k, x.sets + fresh, tuple(flags))


def padded_cover(original: X3cInstance, padded: X3cInstance, cover) -> list:
    """Extend a cover of ``original`` by disjoint fresh triples of ``padded``.

    Fresh triples are taken greedily in index order, which covers the fresh
    elements exactly for both padding schemes.
    """
    extended, used = list(cover), set()
    for q in range(original.s, padded.s):
        if used.isdisjoint(padded.sets[q]):
            extended.append(q)
            used.update(padded.sets[q])
    return extended


def gadget_exjump(x: X3cInstance, cover=None) -> GadgetOutput:
    """Reciprocal-factor instance that has a jump stable assignment exactly
    when ``x`` has an exact cover.

    Components: two cliques of |S|+2 nodes, a clique of |S|-|R|/3 nodes, and a
    clique of |R| nodes with |R|/3 extra nodes each tied to a triple.
    """
    bounds = exjump_bounds(x.r, x.s)
    failing = [name for name, ok in bounds.items() if not ok]
    if failing:
        raise GadgetError("size bounds violated: " + ", ".join(failing))
    r, s = x.r, x.s
    third = r // 3
    b = _Builder()
    for e in range(r):
        b.agent(("a", e))
    for q in range(s):
        b.agent(("b", q))
    b.agent("c")
    penalty = Fraction(-6, r - 3)
    for e in range(r):
        b.like(("a", e), ("a", (e + 1) % r), 1)
    for q, triple in enumerate(x.sets):
        for e in range(r):
            b.like(("b", q), ("a", e), 1 if e in triple else penalty)
        b.like(("b", q), "c", -10)
    for q in range(s):
        b.like("c", ("b", q), 1)

    sizes = {1: s + 2, 2: s + 2, 3: s - third, 4: r + third}
    for comp, size in sizes.items():
        for j in range(1, size + 1):
            b.node(f"v{comp}_{j}")
    for comp in (1, 2, 3):
        b.clique([f"v{comp}_{j}" for j in range(1, sizes[comp] + 1)])
    b.clique([f"v4_{j}" for j in range(1, r + 1)])
    for i in range(1, third + 1):
        for j in (3 * i - 2, 3 * i - 1, 3 * i):
            b.edge(f"v4_{j}", f"v4_{r + i}")

    witness = None
    if cover is not None:
        cover = list(cover)
        if not x.is_cover(cover):
            raise GadgetError("supplied sets are not an exact cover")
        where = {"c": "v1_1"}
        slot = 1
        for i, q in enumerate(cover, start=1):
            for e in x.sets[q]:
                where[("a", e)] = f"v4_{slot}"
                slot += 1
            where[("b", q)] = f"v4_{r + i}"
        rest = [q for q in range(s) if q not in cover]
        for j, q in enumerate(rest, start=1):
            where[("b", q)] = f"v3_{j}"
        witness = b.placement(where)
    meta = _meta(b, component_sizes=[sizes[c] for c in (1, 2, 3, 4)], cover=cover)
    return GadgetOutput(b.instance(DistanceFactor.reciprocal()), None, witness, None, meta)


def _label(name) -> str:
    if isinstance(name, tuple):
        return f"{name[0]}_{name[1] + 1}"
    return str(name)


def dynamics_epsilon(factor: DistanceFactor) -> Fraction:
    """Fixed point inside the admissible open interval for the set agents' bonus."""
    f1, f2 = factor_at(factor, 1), factor_at(factor, 2)
    return (f1 - f2) / (2 * (2 * f1 + f2))


def pad_x3c_for_dynconv(x: X3cInstance) -> X3cInstance:
    """Add 3k fresh elements and every 3-subset of them, k minimal, until
    3|S| > 2|R|."""
    k = 0
    while 3 * (x.s + len(list(itertools.combinations(range(3 * k), 3)))) <= 2 * (x.r + 3 * k):
        k += 1
    fresh = tuple(
        tuple(x.r + e for e in combo) for combo in itertools.combinations(range(3 * k), 3)
    )
    return X3cInstance(x.r + 3 * k, x.sets + fresh, x.flags)


def _first_component(b, r):
    """Nodes z1, z2, x_1..x_|R| and |R|/3 four-cliques y_i^1..y_i^4."""
    b.node("z1")
    b.node("z2")
    b.edge("z1", "z2")
    for i in range(1, r + 1):
        b.node(f"x{i}")
        b.edge(f"x{i}", "z2")
    for i in range(1, r // 3 + 1):
        names = [f"y{i}^{j}" for j in range(1, 5)]
        for name in names:
            b.node(name)
        b.clique(names)
        for name in names[:3]:
            b.edge(name, "z1")


def _cover_moves(x, cover):
    """Element agents into the y-triples, then set agents onto the y^4 nodes."""
    moves = []
    for i, q in enumerate(cover, start=1):
        for j, e in enumerate(x.sets[q], start=1):
            moves.append((("a", e), f"y{i}^{j}"))
    for i, q in enumerate(cover, start=1):
        moves.append((("b", q), f"y{i}^4"))
    return moves


def _check_cover(x, cover):
    cover = list(cover)
    if not x.is_cover(cover):
        raise GadgetError("supplied sets are not an exact cover")
    return cover


def gadget_dynconv(x: X3cInstance, factor: DistanceFactor | None = None, cover=None) -> GadgetOutput:
    """Start state whose jump dynamics can reach stability iff ``x`` has an
    exact cover.  With a cover, ``script`` is a converging jump sequence."""
    factor = factor or DistanceFactor.reciprocal()
    r, s = x.r, x.s
    if 3 * s <= 2 * r:
        raise GadgetError("needs 3|S| > 2|R| (pad first)")
    eps = dynamics_epsilon(factor)
    b = _Builder()
    for name in ("alpha1", "alpha2", "alpha3", "delta", "rho1", "rho2"):
        b.agent(name)
    for i in range(1, r + 1):
        b.agent(("gamma", i - 1))
    for e in range(r):
        b.agent(("a", e))
    for q in range(s):
        b.agent(("b", q))

    b.like("alpha1", "alpha2", 1)
    b.like("alpha2", "alpha3", 1)
    b.like("alpha3", "alpha1", 1)
    b.like("delta", "alpha1", s - Fraction(r, 3) + Fraction(1, 2))
    for q, triple in enumerate(x.sets):
        b.like("delta", ("b", q), 1)
        b.like(("b", q), "delta", 1)
        for e in triple:
            b.like(("b", q), ("a", e), (1 + eps) / 3)
    for e in range(r):
        b.like(("a", e), "rho1", 1)
    for i in range(r):
        b.like(("gamma", i), "rho2", 1)

    _first_component(b, r)
    ws = [f"w{i}" for i in range(1, s + 2)]
    for name in ws:
        b.node(name)
    b.clique(ws)
    for i in range(1, 5):
        b.node(f"t{i}")
    for i in range(1, 5):
        b.edge(f"t{i}", f"t{i % 4 + 1}")
    qs = [f"q{i}" for i in range(1, r + 1)]
    for name in qs:
        b.node(name)
    b.clique(qs)

    where = {"rho1": "z1", "rho2": "z2", "delta": f"w{s + 1}"}
    for e in range(r):
        where[("a", e)] = f"x{e + 1}"
    for q in range(s):
        where[("b", q)] = f"w{q + 1}"
    for i in range(1, 4):
        where[f"alpha{i}"] = f"t{i}"
    for i in range(r):
        where[("gamma", i)] = f"q{i + 1}"
    initial = b.placement(where)

    script = None
    if cover is not None:
        cover = _check_cover(x, cover)
        moves = _cover_moves(x, cover)
        moves.append(("delta", "t4"))
        moves.extend((("gamma", i), f"x{i + 1}") for i in range(r))
        script = b.steps(moves)
    meta = _meta(b, epsilon=eps, cover=cover)
    return GadgetOutput(b.instance(factor), initial, None, script, meta)


def gadget_dyncycle(x: X3cInstance, factor: DistanceFactor | None = None, cover=None) -> GadgetOutput:
    """Start state whose jump dynamics can cycle iff ``x`` has an exact cover.

    With a cover, ``script`` is the finite prefix ending with delta's jump;
    from there the three alpha agents can rotate on the 4-cycle forever.
    The 4-cycle nodes precede the pendant leaves so that lowest-index
    tie-breaking keeps the rotation on the cycle.
    """
    factor = factor or DistanceFactor.reciprocal()
    r, s = x.r, x.s
    third = r // 3
    if third < 1:
        raise GadgetError("ground set must be non-empty")
    eps = dynamics_epsilon(factor)
    b = _Builder()
    for name in ("alpha1", "alpha2", "alpha3", "delta", "rho1", "rho2", "sigma"):
        b.agent(name)
    for i in range(third):
        b.agent(("sigma", i))
    for e in range(r):
        b.agent(("a", e))
    for q in range(s):
        b.agent(("b", q))

    b.like("alpha1", "alpha2", 1)
    b.like("alpha2", "alpha3", 1)
    b.like("alpha3", "alpha1", 1)
    for i in range(third):
        b.like("delta", ("sigma", i), 1)
        b.like(("sigma", i), "sigma", 1)
    b.like("delta", "alpha1", Fraction(r, 3) - Fraction(1, 2))
    for q, triple in enumerate(x.sets):
        b.like(("b", q), "sigma", 1)
        for e in triple:
            b.like(("b", q), ("a", e), (1 + eps) / 3)
    for e in range(r):
        b.like(("a", e), "rho1", 1)

    _first_component(b, r)
    ws = [f"w{i}" for i in range(1, s + 3)]
    for name in ws:
        b.node(name)
    b.clique(ws)
    for i in range(1, 5):
        b.node(f"t{i}")
    for i in range(1, 5):
        b.edge(f"t{i}", f"t{i % 4 + 1}")
    for i in range(1, third + 1):
        b.node(f"v{i}")
        b.edge("t4", f"v{i}")

    where = {"rho1": "z1", "rho2": "z2", "sigma": f"w{s + 1}", "delta": "t4"}
    for e in range(r):
        where[("a", e)] = f"x{e + 1}"
    for q in range(s):
        where[("b", q)] = f"w{q + 1}"
    for i in range(1, 4):
        where[f"alpha{i}"] = f"t{i}"
    for i in range(third):
        where[("sigma", i)] = f"v{i + 1}"
    initial = b.placement(where)

    script = None
    if cover is not None:
        cover = _check_cover(x, cover)
        moves = _cover_moves(x, cover)
        moves.extend((("sigma", i), f"w{q + 1}") for i, q in enumerate(cover))
        moves.append(("delta", f"w{s + 2}"))
        script = b.steps(moves)
    meta = _meta(
        b,
        epsilon=eps,
        cover=cover,
        cycle_agents=[b.agent_ix[f"alpha{i}"] for i in range(1, 4)],
    )
    return GadgetOutput(b.instance(factor), initial, None, script, meta)


# --- local search reductions ------------------------------------------------


def _weight_matrix(weights, size_check):
    t = len(weights)
    w = [[Fraction(0)] * t for _ in range(t)]
    for x in range(t):
        if len(weights[x]) != t:
            raise GadgetError("weight matrix must be square")
        for y in range(t):
            if x == y:
                continue
            a, c = weights[x][y], weights[y][x]
            if a is None or c is None:
                raise GadgetError(f"graph is not complete: edge {{{x}, {y}}} missing")
            a, c = as_rational(a), as_rational(c)
            if a != c:
                raise GadgetError(f"weights of {{{x}, {y}}} disagree")
            w[x][y] = a
    size_check(t)
    return w


def _two_cliques(t):
    return TopologyGraph.disjoint_union(TopologyGraph.complete(t), TopologyGraph.complete(t))


def gadget_maxcut_reduction(weights, factor: DistanceFactor | None = None) -> GadgetOutput:
    """Agents are Max-Cut vertices with utility minus the edge weight; the
    topology is two t-cliques (nodes ``0..t-1`` and ``t..2t-1``)."""

    def check(t):
        if t < 2:
            raise GadgetError("need at least 2 vertices")

    w = _weight_matrix(weights, check)
    t = len(w)
    utils = tuple(tuple(-w[x][y] for y in range(t)) for x in range(t))
    inst = TdgInstance(utils, _two_cliques(t), factor or DistanceFactor.reciprocal())
    return GadgetOutput(inst, metadata={"weights": w, "t": t})


def gadget_graph_partitioning_reduction(weights, factor: DistanceFactor | None = None) -> GadgetOutput:
    """Agents are the 2t vertices with utility equal to the edge weight; every
    node of the two t-cliques is occupied."""

    def check(size):
        if size % 2:
            raise GadgetError("vertex count must be even")
        if size < 2:
            raise GadgetError("need at least 2 vertices")

    w = _weight_matrix(weights, check)
    t = len(w) // 2
    inst = TdgInstance(tuple(map(tuple, w)), _two_cliques(t), factor or DistanceFactor.reciprocal())
    return GadgetOutput(inst, metadata={"weights": w, "t": t})
