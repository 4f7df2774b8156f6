"""Circuit files and DOT export.

The circuit file is versioned JSON::

    {"version": 1,
     "nodes": [{"id": 0, "kind": "source", "param": null}, ...],
     "edges": [{"from": 0, "from_port": 0, "to": 1, "to_port": 0}, ...],
     "outputs": [2]}

A shift's param is ``{"const": 0|1}`` or ``{"var": "a"}``. Loading validates
and rejects broken files with the complete violation list.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .circuit import (
    Circuit,
    Edge,
    Node,
    NodeKind,
    Phase,
    PhaseParam,
    topo_order,
    validate,
)
from .errors import FileFormatError, ValidationError

FILE_VERSION = 1

_KIND_NAMES = {k.value: k for k in NodeKind}


def circuit_to_dict(c: Circuit) -> dict:
    nodes = []
    for nid in sorted(c.nodes):
        node = c.nodes[nid]
        if node.param is None:
            param = None
        elif node.param.is_const:
            param = {"const": node.param.phase.bit}
        else:
            param = {"var": node.param.name}
        nodes.append({"id": node.id, "kind": node.kind.value, "param": param})
    edges = [
        {"from": e.src, "from_port": e.src_port, "to": e.dst, "to_port": e.dst_port}
        for e in c.edges
    ]
    return {"version": FILE_VERSION, "nodes": nodes, "edges": edges, "outputs": list(c.outputs)}


def circuit_from_dict(data: dict) -> Circuit:
    if not isinstance(data, dict):
        raise FileFormatError("circuit file must be a JSON object")
    if data.get("version") != FILE_VERSION:
        raise FileFormatError(f"unsupported circuit file version {data.get('version')!r}")
    for key in ("nodes", "edges", "outputs"):
        if not isinstance(data.get(key), list):
            raise FileFormatError(f"missing or malformed {key!r} list")

    nodes = []
    for entry in data["nodes"]:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise FileFormatError(f"malformed node entry {entry!r}")
        kind = _KIND_NAMES.get(entry.get("kind"))
        if kind is None:
            raise FileFormatError(f"unknown node kind {entry.get('kind')!r}")
        raw = entry.get("param")
        if raw is None:
            param = None
        elif isinstance(raw, dict) and set(raw) == {"const"} and raw["const"] in (0, 1):
            param = PhaseParam.const(Phase(raw["const"]))
        elif isinstance(raw, dict) and set(raw) == {"var"} and isinstance(raw["var"], str):
            param = PhaseParam.var(raw["var"])
        else:
            raise FileFormatError(f"malformed param {raw!r} on node {entry['id']}")
        nodes.append(Node(entry["id"], kind, param))

    edges = []
    for entry in data["edges"]:
        if not isinstance(entry, dict):
            raise FileFormatError(f"malformed edge entry {entry!r}")
        try:
            edges.append(
                Edge(entry["from"], entry["from_port"], entry["to"], entry["to_port"])
            )
        except KeyError as missing:
            raise FileFormatError(f"edge entry missing field {missing}") from None
    if not all(isinstance(o, int) for o in data["outputs"]):
        raise FileFormatError("outputs must be node ids")

    c = Circuit(nodes, edges, data["outputs"])
    violations = validate(c)
    if violations:
        raise ValidationError(violations)
    return c


def save_circuit(c: Circuit, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(circuit_to_dict(c), indent=2) + "\n", encoding="utf-8")


def load_circuit(path: Union[str, Path]) -> Circuit:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"not valid JSON: {exc}") from None
    return circuit_from_dict(data)


_DOT_STYLE = {
    NodeKind.SOURCE: ("src", "plaintext"),
    NodeKind.OUTPUT: ("out", "plaintext"),
    NodeKind.COPY: ("⎇", "triangle"),
    NodeKind.MERGE: ("Σ", "invtriangle"),
}


def export_dot(c: Circuit) -> str:
    """Deterministic DOT rendering, drawn bottom-to-top like the diagrams."""
    violations = validate(c)
    if violations:
        raise ValidationError(violations)
    lines = ["digraph circuit {", "  rankdir=BT;"]
    for nid in topo_order(c):
        node = c.nodes[nid]
        if node.kind is NodeKind.SHIFT:
            if node.param.is_var:
                label = node.param.name
            else:
                label = "θ=π" if node.param.phase is Phase.PI else "θ=0"
            shape = "box"
        else:
            label, shape = _DOT_STYLE[node.kind]
        lines.append(f'  n{nid} [label="{label}" shape={shape}];')
    rank = {nid: i for i, nid in enumerate(topo_order(c))}
    for e in sorted(c.edges, key=lambda e: (rank[e.src], e.src_port)):
        attrs = []
        if c.nodes[e.src].kind is NodeKind.COPY:
            attrs.append(f'taillabel="{e.src_port}"')
        if c.nodes[e.dst].kind is NodeKind.MERGE:
            attrs.append(f'headlabel="{e.dst_port}"')
        suffix = f" [{' '.join(attrs)}]" if attrs else ""
        lines.append(f"  n{e.src} -> n{e.dst}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
