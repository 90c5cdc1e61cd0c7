"""JSON reading and writing.

Files use 1-based agent and node indices; everything in memory is 0-based.
Rationals are written as ``[num, den]`` pairs.

Instance::

    {"n": 2,
     "utilities": [[[0, 1], [1, 1]], [[-1, 1], [0, 1]]],
     "topology": {"nodes": 4, "edges": [[1, 2], [2, 3], [3, 4]]},
     "factor": {"kind": "reciprocal"}}

``utilities`` may instead be a sparse list of
``{"from": i, "to": j, "num": p, "den": q}`` records (``den`` defaults to 1).
A table factor is ``{"kind": "table", "values": [[p, q], ...]}``.

Assignment::

    {"placement": [1, 3]}
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import DistanceFactor, TdgError, TdgInstance, TopologyGraph


class FormatError(TdgError):
    """A file does not follow the expected layout; the message names where."""


def rational_to_json(value) -> list:
    value = Fraction(value)
    return [value.numerator, value.denominator]


def _rational(raw, where) -> Fraction:
    if isinstance(raw, bool):
        raise FormatError(f"{where}: expected a rational, got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(
        isinstance(x, int) and not isinstance(x, bool) for x in raw
    ):
        if raw[1] == 0:
            raise FormatError(f"{where}: zero denominator")
        return Fraction(raw[0], raw[1])
    raise FormatError(f"{where}: expected [num, den], got {raw!r}")


def _index(raw, limit, where) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or not 1 <= raw <= limit:
        raise FormatError(f"{where}: index {raw!r} not in 1..{limit}")
    return raw - 1


def _field(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"{where}: missing key {key!r}")
    return doc[key]


# --- instances -------------------------------------------------------------


def instance_to_dict(instance: TdgInstance) -> dict:
    topo = instance.topology
    factor = {"kind": instance.factor.kind}
    if instance.factor.kind == "table":
        factor["values"] = [rational_to_json(v) for v in instance.factor.table]
    return {
        "n": instance.n,
        "utilities": [[rational_to_json(x) for x in row] for row in instance.utilities],
        "topology": {"nodes": topo.node_count, "edges": [[a + 1, b + 1] for a, b in sorted(topo.edges)]},
        "factor": factor,
    }


def instance_from_dict(doc) -> TdgInstance:
    n = _field(doc, "n", "instance")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError(f"instance.n: expected a positive integer, got {n!r}")

    topo_doc = _field(doc, "topology", "instance")
    nodes = _field(topo_doc, "nodes", "instance.topology")
    if isinstance(nodes, bool) or not isinstance(nodes, int) or nodes < 0:
        raise FormatError(f"instance.topology.nodes: expected a non-negative integer, got {nodes!r}")
    raw_edges = _field(topo_doc, "edges", "instance.topology")
    if not isinstance(raw_edges, list):
        raise FormatError("instance.topology.edges: expected a list")
    edges = []
    for k, e in enumerate(raw_edges):
        where = f"instance.topology.edges[{k}]"
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"{where}: expected [a, b]")
        edges.append((_index(e[0], nodes, where), _index(e[1], nodes, where)))

    factor_doc = doc.get("factor", {"kind": "reciprocal"})
    kind = _field(factor_doc, "kind", "instance.factor")
    if kind == "reciprocal":
        factor = DistanceFactor.reciprocal()
    elif kind == "table":
        values = _field(factor_doc, "values", "instance.factor")
        if not isinstance(values, list):
            raise FormatError("instance.factor.values: expected a list")
        factor = DistanceFactor.from_table(
            [_rational(v, f"instance.factor.values[{k}]") for k, v in enumerate(values)]
        )
    else:
        raise FormatError(f"instance.factor.kind: unknown kind {kind!r}")

    raw = _field(doc, "utilities", "instance")
    if not isinstance(raw, list):
        raise FormatError("instance.utilities: expected a list")
    rows = [[Fraction(0)] * n for _ in range(n)]
    if raw and isinstance(raw[0], dict):
        for k, entry in enumerate(raw):
            where = f"instance.utilities[{k}]"
            if not isinstance(entry, dict):
                raise FormatError(f"{where}: expected a sparse record")
            i = _index(_field(entry, "from", where), n, where + ".from")
            j = _index(_field(entry, "to", where), n, where + ".to")
            rows[i][j] = _rational([_field(entry, "num", where), entry.get("den", 1)], where)
    else:
        if len(raw) != n:
            raise FormatError(f"instance.utilities: expected {n} rows, got {len(raw)}")
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != n:
                raise FormatError(f"instance.utilities[{i}]: expected {n} entries")
            for j, x in enumerate(row):
                rows[i][j] = _rational(x, f"instance.utilities[{i}][{j}]")

    try:
        topology = TopologyGraph.from_edges(nodes, edges)
        return TdgInstance(tuple(map(tuple, rows)), topology, factor)
    except FormatError:
        raise
    except TdgError as exc:
        raise FormatError(f"instance: {exc}") from exc


# --- assignments and scripts ----------------------------------------------


def assignment_to_dict(placement) -> dict:
    return {"placement": [v + 1 for v in placement]}


def assignment_from_dict(doc, instance: TdgInstance | None = None) -> tuple:
    raw = _field(doc, "placement", "assignment")
    if not isinstance(raw, list):
        raise FormatError("assignment.placement: expected a list")
    limit = instance.node_count if instance is not None else float("inf")
    placement = []
    for k, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= limit:
            raise FormatError(f"assignment.placement[{k}]: node {v!r} out of range")
        placement.append(v - 1)
    if instance is not None and len(placement) != instance.n:
        raise FormatError(f"assignment.placement: {len(placement)} entries, expected {instance.n}")
    if len(set(placement)) != len(placement):
        raise FormatError("assignment.placement: not injective")
    return tuple(placement)


def script_to_list(script) -> list:
    return [[a + 1, b + 1] for a, b in script]


def script_from_doc(doc) -> tuple:
    """A script file is ``{"script": [[agent, node], ...]}`` or the bare list."""
    raw = doc.get("script") if isinstance(doc, dict) else doc
    if not isinstance(raw, list):
        raise FormatError("script: expected a list of [agent, target] pairs")
    steps = []
    for k, s in enumerate(raw):
        if not (isinstance(s, list) and len(s) == 2 and all(isinstance(x, int) and x >= 1 for x in s)):
            raise FormatError(f"script[{k}]: expected [agent, target] with 1-based indices")
        steps.append((s[0] - 1, s[1] - 1))
    return tuple(steps)


# --- reports ---------------------------------------------------------------


def jsonable(value):
    """Recursively convert Fractions, tuples and sets for ``json.dumps``."""
    if isinstance(value, Fraction):
        return rational_to_json(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return [jsonable(v) for v in sorted(value)]
    return value


def trace_to_dict(trace) -> dict:
    """Steps (1-based) plus the outcome tag."""
    steps = []
    for s in trace.steps:
        if hasattr(s, "agent"):
            steps.append({
                "agent": s.agent + 1, "from": s.source + 1, "to": s.target + 1,
                "gain": rational_to_json(s.gain),
            })
        else:
            steps.append({
                "agents": [s.first + 1, s.second + 1],
                "gains": [rational_to_json(g) for g in s.gains],
            })
    doc = {
        "start": [v + 1 for v in trace.start],
        "steps": steps,
        "outcome": trace.outcome,
        "final": [v + 1 for v in trace.final],
    }
    if trace.cycle_start is not None:
        doc["cycle_start"] = trace.cycle_start
    if trace.phi_values is not None:
        doc["phi"] = [rational_to_json(p) for p in trace.phi_values]
    return doc


# report fields that hold agent or set indices (shifted to 1-based on output)
_INDEX_FIELDS = ("order", "cycle_order", "cycles", "cover", "cycle_agents")


def _one_based(value):
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        return [_one_based(v) for v in value]
    return value + 1


def _shift_indices(fields: dict) -> dict:
    return {k: _one_based(v) if k in _INDEX_FIELDS else v for k, v in fields.items()}


def solver_report_to_dict(report) -> dict:
    doc = {
        "status": report.status,
        "method": report.method,
        "checks": [{"name": name, "passed": ok} for name, ok in report.checks],
        "assignment": None if report.assignment is None else [v + 1 for v in report.assignment],
    }
    if report.details:
        doc["details"] = jsonable(_shift_indices(report.details))
    return doc


def gadget_to_dict(out) -> dict:
    """Instance fields plus optional assignments, script and a metadata block."""
    doc = instance_to_dict(out.instance)
    if out.initial_assignment is not None:
        doc["initial_assignment"] = assignment_to_dict(out.initial_assignment)
    if out.witness_assignment is not None:
        doc["witness_assignment"] = assignment_to_dict(out.witness_assignment)
    if out.script is not None:
        doc["script"] = script_to_list(out.script)
    doc["metadata"] = jsonable(_shift_indices(out.metadata))
    return doc


# --- files -----------------------------------------------------------------


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc


def dump_json(doc, path=None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def load_instance(path) -> TdgInstance:
    return instance_from_dict(load_json(path))


def load_assignment(path, instance=None) -> tuple:
    return assignment_from_dict(load_json(path), instance)


def save_instance(instance, path) -> None:
    dump_json(instance_to_dict(instance), path)


def save_assignment(placement, path) -> None:
    dump_json(assignment_to_dict(placement), path)
