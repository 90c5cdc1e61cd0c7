"""Command-line front end.

Exit codes (stable, for scripting):

    0  success / stable / exists / converged
    1  negative answer: unstable, no stable assignment, dynamics cycled
    2  bad input: unreadable or malformed file, unknown gadget, invalid assignment
    3  not applicable: a solver or gadget precondition failed
    4  budget exceeded: oracle budget, step limit or state limit

Human-readable summaries go to stdout; ``--json`` switches to JSON.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dynamics, gadgets, io, oracle, solvers
from .core import TdgError, TopologyGraph
from .stability import beneficial_jumps, beneficial_swaps

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_NOT_APPLICABLE = 3
EXIT_BUDGET = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt(value) -> str:
    return str(value)  # Fraction prints as p/q, integers plainly


def _emit(args, doc, lines):
    if args.json:
        sys.stdout.write(io.dump_json(doc))
    else:
        for line in lines:
            print(line)


def _load_instance(path):
    try:
        return io.load_instance(path)
    except TdgError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc


def _load_assignment(path, instance):
    try:
        return io.load_assignment(path, instance)
    except TdgError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc


# --- check -----------------------------------------------------------------


def cmd_check(args) -> int:
    instance = _load_instance(args.instance)
    placement = _load_assignment(args.assignment, instance)
    if args.notion == "jump":
        devs = beneficial_jumps(instance, placement)
        records = [{"agent": d.agent + 1, "target": d.target + 1, "gain": io.rational_to_json(d.gain)} for d in devs]
        text = [f"  agent {d.agent + 1} -> node {d.target + 1}  gain {_fmt(d.gain)}" for d in devs]
    else:
        devs = beneficial_swaps(instance, placement)
        records = [
            {"agents": [d.first + 1, d.second + 1], "gains": [io.rational_to_json(g) for g in d.gains]}
            for d in devs
        ]
        text = [
            f"  agents {d.first + 1} <-> {d.second + 1}  gains {_fmt(d.gains[0])}, {_fmt(d.gains[1])}"
            for d in devs
        ]
    stable = not devs
    verdict = "stable" if stable else "unstable"
    doc = {"notion": args.notion, "stable": stable, "deviations": records}
    lines = [f"{verdict} ({args.notion}); {len(devs)} beneficial deviation(s)"] + text
    _emit(args, doc, lines)
    return EXIT_OK if stable else EXIT_NO


# --- solve -----------------------------------------------------------------


SOLVERS = {
    "acyclic": solvers.solve_acyclic,
    "cycle": solvers.solve_cycle_on_cycle,
    "path": solvers.solve_path,
    "star": solvers.solve_extended_star,
}


def _brute(instance, budget) -> solvers.SolverReport:
    found, witness = oracle.exists_jump_stable(instance, budget)
    checks = (("within budget", True),)
    details = {"assignments": oracle.assignment_count(instance)}
    if found:
        return solvers.SolverReport(solvers.FOUND, "brute", checks, witness, details)
    return solvers.SolverReport(solvers.NONEXISTENT, "brute", checks, None, details)


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    if args.method == "brute":
        try:
            report = _brute(instance, oracle.default_budget())
        except oracle.BudgetExceeded as exc:
            raise CliError(EXIT_BUDGET, str(exc)) from exc
    else:
        report = SOLVERS[args.method](instance)
    # the report is JSON either way
    sys.stdout.write(io.dump_json(io.solver_report_to_dict(report)))
    if args.out and report.assignment is not None:
        io.save_assignment(report.assignment, args.out)
    return {solvers.FOUND: EXIT_OK, solvers.NONEXISTENT: EXIT_NO}.get(report.status, EXIT_NOT_APPLICABLE)


# --- dynamics --------------------------------------------------------------


def _policy(args):
    if args.policy == "first":
        return dynamics.FirstDeviator()
    if args.policy == "best":
        return dynamics.BestGain()
    if args.policy == "random":
        return dynamics.SeededRandom(args.seed)
    if not args.script:
        raise CliError(EXIT_INPUT, "--policy scripted needs --script FILE")
    try:
        return dynamics.Scripted(io.script_from_doc(io.load_json(args.script)))
    except TdgError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc


DYNAMICS_EXIT = {
    dynamics.CONVERGED: EXIT_OK,
    dynamics.CYCLE: EXIT_NO,
    dynamics.SCRIPT_EXHAUSTED: EXIT_NO,
    dynamics.STEP_LIMIT: EXIT_BUDGET,
}


def cmd_dynamics(args) -> int:
    instance = _load_instance(args.instance)
    start = _load_assignment(args.start, instance)
    policy = _policy(args)
    run = dynamics.run_dynamics if args.moves == "jump" else dynamics.run_swap_dynamics
    try:
        trace = run(instance, start, policy, args.max_steps)
    except dynamics.DynamicsError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc
    doc = io.trace_to_dict(trace)
    if args.emit_trace:
        io.dump_json(doc, args.emit_trace)
    summary = {"outcome": trace.outcome, "steps": len(trace.steps), "final": doc["final"]}
    if trace.cycle_start is not None:
        summary["cycle_start"] = trace.cycle_start
    lines = [f"{trace.outcome} after {len(trace.steps)} step(s)"]
    if trace.cycle_start is not None:
        lines.append(f"state after step {trace.cycle_start} repeats; cycle length {trace.cycle_length}")
    lines.append("final placement: " + " ".join(str(v) for v in doc["final"]))
    _emit(args, summary, lines)
    return DYNAMICS_EXIT[trace.outcome]


# --- statespace ------------------------------------------------------------


def cmd_statespace(args) -> int:
    instance = _load_instance(args.instance)
    start = _load_assignment(args.start, instance)
    try:
        graph = dynamics.explore_state_graph(instance, [start], args.limit, args.moves)
    except dynamics.StateSpaceTooLarge as exc:
        raise CliError(EXIT_BUDGET, f"{exc} (limit {exc.limit})") from exc
    doc = {
        "states": len(graph.states),
        "edges": sum(len(e) for e in graph.edges),
        "stable_states": sum(graph.stable),
        "possibly_converges": dynamics.possibly_converges(graph),
        "necessarily_converges": dynamics.necessarily_converges(graph),
    }
    lines = [f"{key}: {str(value).lower()}" for key, value in doc.items()]
    _emit(args, doc, lines)
    return EXIT_OK


# --- gadget ----------------------------------------------------------------


TOPOLOGIES = {
    "path4": lambda: TopologyGraph.path(4),
    "path5": lambda: TopologyGraph.path(5),
    "star5": lambda: TopologyGraph.star(5),
    "cycle7": lambda: TopologyGraph.cycle(7),
}


def _load_x3c(path):
    """``{"ground_set_size": R, "sets": [[1,2,3], ...], "cover": [1, ...]}``
    with 1-based elements and set indices; ``cover`` is optional."""
    doc = io.load_json(path)
    if not isinstance(doc, dict) or "ground_set_size" not in doc or "sets" not in doc:
        raise io.FormatError(f"{path}: expected ground_set_size and sets")
    try:
        sets = [tuple(e - 1 for e in s) for s in doc["sets"]]
        x = gadgets.X3cInstance(doc["ground_set_size"], tuple(sets))
        cover = doc.get("cover")
        cover = None if cover is None else [q - 1 for q in cover]
    except (TypeError, gadgets.GadgetError) as exc:
        raise io.FormatError(f"{path}: malformed sets or cover") from exc
    return x, cover


def _load_weights(path):
    """``{"weights": [[w11, w12, ...], ...]}``; entries are ints or [p, q]."""
    doc = io.load_json(path)
    raw = doc.get("weights") if isinstance(doc, dict) else None
    if not isinstance(raw, list):
        raise io.FormatError(f"{path}: expected a weights matrix")
    return [
        [None if x is None else io._rational(x, f"weights[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(raw)
    ]


def _build_gadget(args):
    name = args.name
    if name == "cat-and-mouse":
        return gadgets.gadget_cat_and_mouse(TOPOLOGIES[args.topology]())
    if name == "tree-counterexample":
        return gadgets.gadget_tree_counterexample()
    if name == "roommates":
        return gadgets.gadget_roommates_no_swap()
    if name == "swap-cycle":
        return gadgets.gadget_swap_cycle()
    if name == "exponential":
        return gadgets.gadget_exponential_family(args.k)
    if name in ("exjump", "dynconv", "dyncycle"):
        if not args.x3c:
            raise CliError(EXIT_INPUT, f"gadget {name} needs --x3c FILE")
        x, cover = _load_x3c(args.x3c)
        if name == "exjump":
            padded = gadgets.pad_x3c_for_exjump(x)
        elif name == "dynconv":
            padded = gadgets.pad_x3c_for_dynconv(x)
        else:
            padded = x
        if cover is not None:
            cover = gadgets.padded_cover(x, padded, cover)
        if name == "exjump":
            return gadgets.gadget_exjump(padded, cover)
        if name == "dynconv":
            return gadgets.gadget_dynconv(padded, cover=cover)
        return gadgets.gadget_dyncycle(padded, cover=cover)
    if name in ("maxcut", "graph-partitioning"):
        if not args.weights:
            raise CliError(EXIT_INPUT, f"gadget {name} needs --weights FILE")
        w = _load_weights(args.weights)
        if name == "maxcut":
            return gadgets.gadget_maxcut_reduction(w)
        return gadgets.gadget_graph_partitioning_reduction(w)
    raise CliError(EXIT_INPUT, f"unknown gadget {name!r}")


GADGET_NAMES = (
    "cat-and-mouse", "tree-counterexample", "roommates", "swap-cycle", "exponential",
    "exjump", "dynconv", "dyncycle", "maxcut", "graph-partitioning",
)


def cmd_gadget(args) -> int:
    try:
        out = _build_gadget(args)
    except gadgets.GadgetError as exc:
        raise CliError(EXIT_NOT_APPLICABLE, f"precondition failed: {exc}") from exc
    doc = io.gadget_to_dict(out)
    if args.out:
        path = Path(args.out)
        io.dump_json(doc, path)
        # standalone assignment files next to the gadget, usable by check/dynamics
        for key, value in (("initial", out.initial_assignment), ("witness", out.witness_assignment)):
            if value is not None:
                io.save_assignment(value, path.with_name(f"{path.stem}.{key}{path.suffix}"))
        if out.script is not None:
            io.dump_json({"script": io.script_to_list(out.script)}, path.with_name(f"{path.stem}.script{path.suffix}"))
    if args.json or not args.out:
        sys.stdout.write(io.dump_json(doc))
    else:
        inst = out.instance
        print(f"{args.name}: n={inst.n} nodes={inst.node_count} edges={len(inst.topology.edges)}")
        if out.script is not None:
            print(f"script: {len(out.script)} step(s)")
        print(f"written to {args.out}")
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--threads", type=int, default=1,
        help="accepted for compatibility; enumeration is single-threaded",
    )

    parser = argparse.ArgumentParser(prog="tdg", description="Topological distance games toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check stability of an assignment")
    p.add_argument("instance")
    p.add_argument("assignment")
    p.add_argument("--notion", choices=("jump", "swap"), default="jump")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", parents=[common], help="construct a jump stable assignment")
    p.add_argument("instance")
    p.add_argument("--method", choices=(*SOLVERS, "brute"), default="acyclic")
    p.add_argument("--out", help="also write the assignment to this file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("dynamics", parents=[common], help="run beneficial-move dynamics")
    p.add_argument("instance")
    p.add_argument("start")
    p.add_argument("--policy", choices=tuple(dynamics.POLICIES), default="first")
    p.add_argument("--seed", type=int, default=0, help="seed for --policy random")
    p.add_argument("--script", help="script file for --policy scripted")
    p.add_argument("--moves", choices=("jump", "swap"), default="jump")
    p.add_argument("--max-steps", type=int, default=dynamics.DEFAULT_MAX_STEPS)
    p.add_argument("--emit-trace", metavar="FILE", help="write the full trace as JSON")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("statespace", parents=[common], help="explore all reachable states")
    p.add_argument("instance")
    p.add_argument("start")
    p.add_argument("--limit", type=int, default=dynamics.DEFAULT_STATE_LIMIT)
    p.add_argument("--moves", choices=("jump", "swap"), default="jump")
    p.set_defaults(func=cmd_statespace)

    p = sub.add_parser("gadget", parents=[common], help="emit a named instance family")
    p.add_argument("name", help=", ".join(GADGET_NAMES))
    p.add_argument("--topology", choices=tuple(TOPOLOGIES), default="path4")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--x3c", help="Exact 3-Cover instance file")
    p.add_argument("--weights", help="weighted complete graph file")
    p.add_argument("--out", help="write the gadget here (plus .initial/.witness/.script siblings)")
    p.set_defaults(func=cmd_gadget)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except TdgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
