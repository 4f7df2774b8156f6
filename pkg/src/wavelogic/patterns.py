"""Structural pattern machinery for the rewrite rules.

Rules operate on two shapes:

* *chains*: runs of shift nodes along a single wire;
* *cells*: a copy whose three branches all reconverge at one merge -- the
  canonical majority diagram. Branch contents are parsed into content trees
  (shift items and nested cells), which makes content comparison, complement
  detection and rebuilding exact and cheap.

A merge whose arms do not come from a single copy is matched only by the
commutativity rule; the constructors never produce such a merge, so this is a
sound under-approximation for hand-built circuits.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .circuit import (
    Circuit,
    Edge,
    Node,
    NodeKind,
    Phase,
    PhaseParam,
    fingerprint,
    topo_order,
)

PI = PhaseParam.const(Phase.PI)
ZERO = PhaseParam.const(Phase.ZERO)


class Direction(Enum):
    LR = "L->R"
    RL = "R->L"

    def flip(self) -> "Direction":
        return Direction.RL if self is Direction.LR else Direction.LR

    def __str__(self) -> str:
        return self.value


# ---------------------------------------------------------------------------
# Content trees


@dataclass(frozen=True)
class ShiftT:
    param: PhaseParam

    def __str__(self) -> str:
        return str(self.param)


@dataclass(frozen=True)
class CellT:
    branches: tuple["Chain", "Chain", "Chain"]

    def __str__(self) -> str:
        return "cell(" + "|".join(format_chain(b) for b in self.branches) + ")"


Item = Union[ShiftT, CellT]
Chain = tuple  # tuple[Item, ...]


def format_chain(chain: Chain) -> str:
    return ";".join(str(item) for item in chain) if chain else "-"


def chain_is_complement(shorter: Chain, longer: Chain) -> bool:
    """True when ``longer`` is ``shorter`` followed by one pi shift."""
    return len(longer) == len(shorter) + 1 and longer[:-1] == shorter and longer[-1] == ShiftT(PI)


@dataclass(frozen=True)
class Cell:
    """A matched copy/merge pair with its three branch contents.

    ``interior`` holds every node strictly between the copy and the merge,
    including the nodes of nested cells.
    """

    copy_id: int
    merge_id: int
    chains: tuple[Chain, Chain, Chain]
    interior: frozenset[int]

    @property
    def region(self) -> frozenset[int]:
        return self.interior | {self.copy_id, self.merge_id}


def trace_branch(c: Circuit, wire: tuple[int, int]):
    """Walk a wire upward, parsing shifts and nested cells.

    Returns (chain, interior_ids, (merge_id, port)) when the branch ends at a
    merge input, or None when it escapes the cell shape (reaches an output, or
    passes through a copy whose branches do not reconverge).
    """
    items: list[Item] = []
    ids: list[int] = []
    src, sport = wire
    while True:
        edge = c.out_edge(src, sport)
        node = c.nodes[edge.dst]
        if node.kind is NodeKind.SHIFT:
            items.append(ShiftT(node.param))
            ids.append(node.id)
            src, sport = node.id, 0
        elif node.kind is NodeKind.MERGE:
            return tuple(items), ids, (node.id, edge.dst_port)
        elif node.kind is NodeKind.COPY:
            sub = _trace_cell(c, node.id)
            if sub is None:
                return None
            chains, sub_ids, merge_id = sub
            items.append(CellT(chains))
            ids.extend([node.id, merge_id])
            ids.extend(sub_ids)
            src, sport = merge_id, 0
        else:  # OUTPUT (SOURCE cannot be a consumer)
            return None


def _trace_cell(c: Circuit, copy_id: int):
    """All three branches of ``copy_id`` must converge on one merge.

    Branch contents are keyed by the *merge* input port they arrive at, so a
    commutativity rewrite of the merge wiring visibly permutes the chains.
    """
    chains: list = [None, None, None]
    ids: list[int] = []
    merge_id = None
    for port in range(3):
        traced = trace_branch(c, (copy_id, port))
        if traced is None:
            return None
        chain, branch_ids, (m, merge_port) = traced
        if merge_id is None:
            merge_id = m
        elif merge_id != m:
            return None
        chains[merge_port] = chain
        ids.extend(branch_ids)
    return (chains[0], chains[1], chains[2]), ids, merge_id


def find_cells(c: Circuit) -> list[Cell]:
    """Every copy/merge cell, ordered by the copy's topological position."""
    cells = []
    for nid in topo_order(c):
        if c.nodes[nid].kind is not NodeKind.COPY:
            continue
        traced = _trace_cell(c, nid)
        if traced is None:
            continue
        chains, ids, merge_id = traced
        cells.append(Cell(nid, merge_id, chains, frozenset(ids)))
    return cells


# ---------------------------------------------------------------------------
# Match sites


@dataclass(frozen=True)
class MatchSite:
    """One applicable instance of a rule in a specific circuit.

    ``fingerprint`` ties the site to the exact circuit it was enumerated on;
    applying it anywhere else is rejected as stale.
    """

    rule: str
    direction: Direction
    fingerprint: str
    anchors: tuple[int, ...]
    binding: tuple[tuple[str, object], ...] = ()
    detail: object = None

    def binding_map(self) -> dict:
        return dict(self.binding)

    def summary(self) -> str:
        parts = []
        for name, value in self.binding:
            if isinstance(value, tuple) and all(isinstance(i, (ShiftT, CellT)) for i in value):
                parts.append(f"{name}={format_chain(value)}")
            else:
                parts.append(f"{name}={value}")
        loc = ",".join(str(a) for a in self.anchors)
        text = f"{self.rule} {self.direction} @[{loc}]"
        if parts:
            text += " " + " ".join(parts)
        return text


# ---------------------------------------------------------------------------
# Graph surgery


class Editor:
    """A mutable working copy of a circuit for local rewrites.

    ``finish`` renumbers nodes canonically, so isomorphic results compare equal
    as plain values.
    """

    def __init__(self, c: Optional[Circuit] = None):
        self.nodes: dict[int, Node] = dict(c.nodes) if c else {}
        self.edges: set[Edge] = set(c.edges) if c else set()
        self.outputs: list[int] = list(c.outputs) if c else []
        self._next = max(self.nodes, default=-1) + 1

    def add(self, kind: NodeKind, param: Optional[PhaseParam] = None) -> int:
        nid = self._next
        self._next += 1
        self.nodes[nid] = Node(nid, kind, param)
        return nid

    def connect(self, src, sport, dst, dport):
        self.edges.add(Edge(src, sport, dst, dport))

    def in_edge(self, nid, port) -> Optional[Edge]:
        for e in self.edges:
            if e.dst == nid and e.dst_port == port:
                return e
        return None

    def out_edge(self, nid, port) -> Optional[Edge]:
        for e in self.edges:
            if e.src == nid and e.src_port == port:
                return e
        return None

    def set_param(self, nid: int, param: PhaseParam):
        old = self.nodes[nid]
        self.nodes[nid] = Node(nid, old.kind, param)

    def splice_out(self, nid: int):
        """Remove a 1-in/1-out node, reconnecting its neighbours."""
        before = self.in_edge(nid, 0)
        after = self.out_edge(nid, 0)
        self.edges.discard(before)
        self.edges.discard(after)
        del self.nodes[nid]
        self.connect(before.src, before.src_port, after.dst, after.dst_port)

    def insert_shift(self, edge: Edge, param: PhaseParam) -> int:
        self.edges.discard(edge)
        nid = self.add(NodeKind.SHIFT, param)
        self.connect(edge.src, edge.src_port, nid, 0)
        self.connect(nid, 0, edge.dst, edge.dst_port)
        return nid

    def remove_region(self, region: frozenset[int]):
        """Drop a node set and every edge touching it (boundaries included)."""
        self.edges = {e for e in self.edges if e.src not in region and e.dst not in region}
        for nid in region:
            del self.nodes[nid]

    def build_chain(self, chain: Chain, below: tuple[int, int]) -> tuple[int, int]:
        """Materialise a content tree on top of ``below``; return the exit wire."""
        cur = below
        for item in chain:
            if isinstance(item, ShiftT):
                nid = self.add(NodeKind.SHIFT, item.param)
                self.connect(cur[0], cur[1], nid, 0)
                cur = (nid, 0)
            else:
                k = self.add(NodeKind.COPY)
                m = self.add(NodeKind.MERGE)
                self.connect(cur[0], cur[1], k, 0)
                for port in range(3):
                    exit_wire = self.build_chain(item.branches[port], (k, port))
                    self.connect(exit_wire[0], exit_wire[1], m, port)
                cur = (m, 0)
        return cur

    def finish(self) -> Circuit:
        """Build the circuit with ids 0..n-1 assigned in canonical order."""
        in_edge = {(e.dst, e.dst_port): e for e in self.edges}
        rank: dict[int, int] = {}
        for out in self.outputs:
            stack = [out]
            while stack:
                nid = stack.pop()
                if nid in rank:
                    continue
                rank[nid] = len(rank)
                for port in reversed(range(self.nodes[nid].kind.in_arity)):
                    e = in_edge.get((nid, port))
                    if e is not None:
                        stack.append(e.src)
        for nid in sorted(self.nodes):
            if nid not in rank:
                rank[nid] = len(rank)
        nodes = [Node(rank[n.id], n.kind, n.param) for n in self.nodes.values()]
        edges = [Edge(rank[e.src], e.src_port, rank[e.dst], e.dst_port) for e in self.edges]
        return Circuit(nodes, edges, [rank[o] for o in self.outputs])


def replace_cell(c: Circuit, cell: Cell, replacement: Chain) -> Circuit:
    """Swap a whole cell region for a freshly built content tree."""
    entry = c.in_edge(cell.copy_id, 0)
    exit_edge = c.out_edge(cell.merge_id, 0)
    ed = Editor(c)
    ed.remove_region(cell.region)
    wire = ed.build_chain(replacement, (entry.src, entry.src_port))
    ed.connect(wire[0], wire[1], exit_edge.dst, exit_edge.dst_port)
    return ed.finish()


def insert_cell(c: Circuit, edge: Edge, branches: tuple[Chain, Chain, Chain]) -> Circuit:
    """Grow a cell in the middle of a wire."""
    ed = Editor(c)
    ed.edges.discard(edge)
    wire = ed.build_chain((CellT(branches),), (edge.src, edge.src_port))
    ed.connect(wire[0], wire[1], edge.dst, edge.dst_port)
    return ed.finish()


def edges_in_order(c: Circuit) -> list[Edge]:
    """Edges ordered by the topological position of their producer."""
    rank = {nid: i for i, nid in enumerate(topo_order(c))}
    return sorted(c.edges, key=lambda e: (rank[e.src], e.src_port))


def shifts_in_order(c: Circuit) -> list[Node]:
    return [c.nodes[nid] for nid in topo_order(c) if c.nodes[nid].kind is NodeKind.SHIFT]
