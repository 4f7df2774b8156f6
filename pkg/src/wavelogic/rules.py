"""The rewrite-rule library.

Eleven bidirectional rules over wave circuits:

====  =========  ==========================================================
name  kind       left side = right side
====  =========  ==========================================================
ID    base       zero phase shift = bare wire
Comp  base       complemented constant shift = the shift followed by pi
F     base       two consecutive shifts = one shift carrying their sum
C1    base       shift below a copy = the same shift on all three branches
C2    base       nested copies re-associate (inner copy moves branches)
CM    base       the 3! input permutations of a merge are all equal
D     base       maj(x, y, maj(u,v,z)) = maj(maj(x,y,u), maj(x,y,v), z)
M     base       maj(x, x, y) = x
A     derived    maj(x, u, maj(y,u,z)) = maj(maj(x,u,y), u, z)
CH    base       maj(x, phi, theta) = x   when phi /= theta (constants)
CH2   derived    maj(x, complement(x), w) = w
====  =========  ==========================================================

Every rule is certified at library load by exhaustively instantiating its
metavariables (constants and fresh variable wires) and comparing the truth
tables of both sides; ``all_rules`` refuses to hand out an uncertified
library. Side conditions only ever inspect constant bindings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .boolexpr import And, BoolExpr, Const, Maj, Not, Or, Var, Xor
from .circuit import Circuit, NodeKind, Phase, PhaseParam, fingerprint
from .errors import SoundnessError
from .patterns import (
    PI,
    ZERO,
    Cell,
    CellT,
    Chain,
    Direction,
    Editor,
    MatchSite,
    ShiftT,
    _trace_cell,
    chain_is_complement,
    edges_in_order,
    find_cells,
    format_chain,
    insert_cell,
    replace_cell,
    shifts_in_order,
)
from .semantics import truth_table, variables

PERMS = ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


@dataclass(frozen=True)
class MetaVar:
    name: str
    sort: str  # "phase" | "wire"
    const_only: bool = False


@dataclass(frozen=True)
class RewriteRule:
    name: str
    provenance: str  # "base" | "derived"
    metavars: tuple[MetaVar, ...]
    description: str
    readings: tuple[tuple[BoolExpr, BoolExpr], ...]
    variants: tuple
    build: Callable  # (binding, variant) -> (lhs: Circuit, rhs: Circuit)
    matcher: Callable  # (c, direction, cells) -> list[MatchSite]
    applier: Callable  # (c, site) -> Circuit
    side_condition: Optional[Callable] = None  # (binding) -> bool
    inverse_enumerable: Callable = field(default=lambda site: True)

    def find(self, c: Circuit, direction: Direction, cells=None) -> list[MatchSite]:
        if cells is None:
            cells = find_cells(c)
        return self.matcher(c, direction, cells)

    def apply(self, c: Circuit, site: MatchSite) -> Circuit:
        return self.applier(c, site)


@dataclass(frozen=True)
class Certification:
    rule: str
    ok: bool
    instances: int
    rows_checked: int
    counterexample: Optional[str] = None


# ---------------------------------------------------------------------------
# Shared construction helpers


def _mk(chain: Chain) -> Circuit:
    ed = Editor()
    s = ed.add(NodeKind.SOURCE)
    w = ed.build_chain(chain, (s, 0))
    o = ed.add(NodeKind.OUTPUT)
    ed.connect(w[0], w[1], o, 0)
    ed.outputs = [o]
    return ed.finish()


def _cell(b0: Chain, b1: Chain, b2: Chain) -> Chain:
    return (CellT((b0, b1, b2)),)


def _cell_at(c: Circuit, copy_id: int) -> Cell:
    chains, ids, merge_id = _trace_cell(c, copy_id)
    return Cell(copy_id, merge_id, chains, frozenset(ids))


def _site(rule, direction, c, anchors, binding=(), detail=None) -> MatchSite:
    return MatchSite(rule, direction, fingerprint(c), tuple(anchors), tuple(binding), detail)


def _fuse(p: PhaseParam, q: PhaseParam) -> Optional[PhaseParam]:
    """The single shift equal to p-then-q, when one exists."""
    if p.is_const and q.is_const:
        return PhaseParam.const(p.phase + q.phase)
    if p.is_var and q.is_const and q.phase is Phase.ZERO:
        return p
    if q.is_var and p.is_const and p.phase is Phase.ZERO:
        return q
    return None


def _unfuse(p: PhaseParam) -> list[tuple[PhaseParam, PhaseParam]]:
    if p.is_const and p.phase is Phase.ZERO:
        return [(ZERO, ZERO), (PI, PI)]
    if p.is_const:
        return [(ZERO, PI), (PI, ZERO)]
    return [(ZERO, p), (p, ZERO)]


def _adjacent_shift_pairs(c: Circuit):
    """(lower, upper) shift pairs joined by a wire, in traversal order."""
    pairs = []
    for node in shifts_in_order(c):
        e = c.out_edge(node.id, 0)
        upper = c.nodes[e.dst]
        if upper.kind is NodeKind.SHIFT:
            pairs.append((node, upper))
    return pairs


def _wire_below(c: Circuit, nid: int) -> tuple[int, int]:
    e = c.in_edge(nid, 0)
    return (e.src, e.src_port)


# ---------------------------------------------------------------------------
# ID: zero shift = bare wire


def _id_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for node in shifts_in_order(c):
            if node.param.is_const and node.param.phase is Phase.ZERO:
                sites.append(
                    _site("ID", direction, c, (node.id,), (("base", _wire_below(c, node.id)),))
                )
    else:
        for e in edges_in_order(c):
            sites.append(
                _site("ID", direction, c, (e.src, e.dst), (("base", (e.src, e.src_port)),), e)
            )
    return sites


def _id_apply(c, site):
    ed = Editor(c)
    if site.direction is Direction.LR:
        ed.splice_out(site.anchors[0])
    else:
        ed.insert_shift(site.detail, ZERO)
    return ed.finish()


# ---------------------------------------------------------------------------
# Comp: complemented constant = constant then pi


def _comp_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for node in shifts_in_order(c):
            if node.param.is_const:
                phi = node.param.complemented()
                sites.append(_site("Comp", direction, c, (node.id,), (("phi", phi),)))
    else:
        for lower, upper in _adjacent_shift_pairs(c):
            if lower.param.is_const and upper.param == PI:
                sites.append(
                    _site("Comp", direction, c, (lower.id, upper.id), (("phi", lower.param),))
                )
    return sites


def _comp_apply(c, site):
    ed = Editor(c)
    if site.direction is Direction.LR:
        nid = site.anchors[0]
        phi = site.binding_map()["phi"]
        ed.set_param(nid, phi)
        ed.insert_shift(ed.out_edge(nid, 0), PI)
    else:
        lower, upper = site.anchors
        ed.splice_out(upper)
        ed.set_param(lower, c.nodes[lower].param.complemented())
    return ed.finish()


# ---------------------------------------------------------------------------
# F: fuse consecutive shifts


def _f_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for lower, upper in _adjacent_shift_pairs(c):
            if _fuse(lower.param, upper.param) is not None:
                sites.append(
                    _site(
                        "F",
                        direction,
                        c,
                        (lower.id, upper.id),
                        (("alpha", lower.param), ("beta", upper.param)),
                    )
                )
    else:
        for node in shifts_in_order(c):
            for k, (alpha, beta) in enumerate(_unfuse(node.param)):
                sites.append(
                    _site(
                        "F",
                        direction,
                        c,
                        (node.id,),
                        (("alpha", alpha), ("beta", beta)),
                        ("split", k),
                    )
                )
    return sites


def _f_apply(c, site):
    ed = Editor(c)
    b = site.binding_map()
    if site.direction is Direction.LR:
        lower, upper = site.anchors
        ed.splice_out(upper)
        ed.set_param(lower, _fuse(b["alpha"], b["beta"]))
    else:
        nid = site.anchors[0]
        ed.set_param(nid, b["alpha"])
        ed.insert_shift(ed.out_edge(nid, 0), b["beta"])
    return ed.finish()


# ---------------------------------------------------------------------------
# C1: shift through copy


def _c1_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for node in shifts_in_order(c):
            e = c.out_edge(node.id, 0)
            if c.nodes[e.dst].kind is NodeKind.COPY:
                sites.append(
                    _site("C1", direction, c, (node.id, e.dst), (("phi", node.param),))
                )
    else:
        for nid in sorted(n.id for n in c.nodes_of_kind(NodeKind.COPY)):
            consumers = [c.nodes[c.out_edge(nid, p).dst] for p in range(3)]
            if all(n.kind is NodeKind.SHIFT for n in consumers):
                params = {n.param for n in consumers}
                if len(params) == 1:
                    sites.append(
                        _site(
                            "C1",
                            direction,
                            c,
                            (nid,) + tuple(n.id for n in consumers),
                            (("phi", consumers[0].param),),
                        )
                    )
    return sites


def _c1_apply(c, site):
    ed = Editor(c)
    phi = site.binding_map()["phi"]
    if site.direction is Direction.LR:
        shift_id, copy_id = site.anchors
        ed.splice_out(shift_id)
        for port in range(3):
            ed.insert_shift(ed.out_edge(copy_id, port), phi)
    else:
        copy_id = site.anchors[0]
        for shift_id in site.anchors[1:]:
            ed.splice_out(shift_id)
        ed.insert_shift(ed.in_edge(copy_id, 0), phi)
    return ed.finish()


# ---------------------------------------------------------------------------
# C2: re-associate nested copies (inner copy between branch 0 and branch 2)

_C2_LHS_LEAVES = ("B0", "B1", "B2", "A1", "A2")
_C2_RHS_LEAVES = ("A0", "A1", "B0", "B1", "B2")


def _c2_match(c, direction, cells):
    branch = 0 if direction is Direction.LR else 2
    sites = []
    for nid in sorted(n.id for n in c.nodes_of_kind(NodeKind.COPY)):
        e = c.out_edge(nid, branch)
        if c.nodes[e.dst].kind is NodeKind.COPY:
            sites.append(_site("C2", direction, c, (nid, e.dst)))
    return sites


def _c2_apply(c, site):
    a, b = site.anchors
    if site.direction is Direction.LR:
        old_leaves, new_leaves, new_branch = _C2_LHS_LEAVES, _C2_RHS_LEAVES, 2
    else:
        old_leaves, new_leaves, new_branch = _C2_RHS_LEAVES, _C2_LHS_LEAVES, 0

    def leaf_wire(name):
        owner = a if name[0] == "A" else b
        return (owner, int(name[1]))

    ed = Editor(c)
    consumers = []
    for name in old_leaves:
        e = ed.out_edge(*leaf_wire(name))
        consumers.append((e.dst, e.dst_port))
        ed.edges.discard(e)
    feed = ed.out_edge(a, 0 if site.direction is Direction.LR else 2)
    ed.edges.discard(feed)
    ed.connect(a, new_branch, b, 0)
    for name, (dst, dport) in zip(new_leaves, consumers):
        src, sport = leaf_wire(name)
        ed.connect(src, sport, dst, dport)
    return ed.finish()


# ---------------------------------------------------------------------------
# CM: permute merge inputs


def _cm_match(c, direction, cells):
    sites = []
    for nid in sorted(n.id for n in c.nodes_of_kind(NodeKind.MERGE)):
        arms = tuple(
            ((c.in_edge(nid, p).src, c.in_edge(nid, p).src_port)) for p in range(3)
        )
        binding = (("x", arms[0]), ("y", arms[1]), ("z", arms[2]))
        for perm in PERMS:
            sites.append(_site("CM", direction, c, (nid,), binding, perm))
    return sites


def _cm_apply(c, site):
    perm = site.detail
    if site.direction is Direction.RL:
        inv = [0, 0, 0]
        for i, p in enumerate(perm):
            inv[p] = i
        perm = tuple(inv)
    nid = site.anchors[0]
    ed = Editor(c)
    arms = [ed.in_edge(nid, p) for p in range(3)]
    for e in arms:
        ed.edges.discard(e)
    for p, e in enumerate(arms):
        ed.connect(e.src, e.src_port, nid, perm[p])
    return ed.finish()


# ---------------------------------------------------------------------------
# CH: chop two opposite constant branches


def _single_const(chain: Chain) -> Optional[PhaseParam]:
    if len(chain) == 1 and isinstance(chain[0], ShiftT) and chain[0].param.is_const:
        return chain[0].param
    return None


def _ch_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for cell in cells:
            for pos in range(3):
                i, j = [p for p in range(3) if p != pos]
                phi = _single_const(cell.chains[i])
                theta = _single_const(cell.chains[j])
                if phi is not None and theta is not None and phi != theta:
                    sites.append(
                        _site(
                            "CH",
                            direction,
                            c,
                            (cell.copy_id, cell.merge_id),
                            (("x", cell.chains[pos]), ("phi", phi), ("theta", theta)),
                            pos,
                        )
                    )
    else:
        for e in edges_in_order(c):
            for phi, theta in ((ZERO, PI), (PI, ZERO)):
                sites.append(
                    _site(
                        "CH",
                        direction,
                        c,
                        (e.src, e.dst),
                        (("x", ()), ("phi", phi), ("theta", theta)),
                        ("ins", e),
                    )
                )
    return sites


def _ch_apply(c, site):
    b = site.binding_map()
    if site.direction is Direction.LR:
        cell = _cell_at(c, site.anchors[0])
        return replace_cell(c, cell, b["x"])
    _, edge = site.detail
    return insert_cell(c, edge, ((), (ShiftT(b["phi"]),), (ShiftT(b["theta"]),)))


def _ch_inverse_enumerable(site):
    if site.direction is Direction.RL:
        return True
    return site.detail == 0 and site.binding_map()["x"] == ()


# ---------------------------------------------------------------------------
# CH2: chop a branch and its complement

_CH2_PAIRS = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def _ch2_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for cell in cells:
            for i, j in _CH2_PAIRS:
                if chain_is_complement(cell.chains[i], cell.chains[j]):
                    k = 3 - i - j
                    sites.append(
                        _site(
                            "CH2",
                            direction,
                            c,
                            (cell.copy_id, cell.merge_id),
                            (("x", cell.chains[i]), ("w", cell.chains[k])),
                            (i, j),
                        )
                    )
    else:
        for e in edges_in_order(c):
            sites.append(
                _site("CH2", direction, c, (e.src, e.dst), (("x", ()), ("w", ())), ("ins", e))
            )
    return sites


def _ch2_apply(c, site):
    b = site.binding_map()
    if site.direction is Direction.LR:
        cell = _cell_at(c, site.anchors[0])
        return replace_cell(c, cell, b["w"])
    _, edge = site.detail
    return insert_cell(c, edge, ((), (ShiftT(PI),), ()))


def _ch2_inverse_enumerable(site):
    if site.direction is Direction.RL:
        return True
    b = site.binding_map()
    return site.detail == (0, 1) and b["x"] == () and b["w"] == ()


# ---------------------------------------------------------------------------
# M: majority with a duplicated branch collapses

_M_PAIRS = ((0, 1), (0, 2), (1, 2))


def _m_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for cell in cells:
            for i, j in _M_PAIRS:
                if cell.chains[i] == cell.chains[j]:
                    k = 3 - i - j
                    sites.append(
                        _site(
                            "M",
                            direction,
                            c,
                            (cell.copy_id, cell.merge_id),
                            (("x", cell.chains[i]), ("y", cell.chains[k])),
                            (i, j),
                        )
                    )
    else:
        for e in edges_in_order(c):
            sites.append(
                _site("M", direction, c, (e.src, e.dst), (("x", ()), ("y", ())), ("ins", e))
            )
    return sites


def _m_apply(c, site):
    b = site.binding_map()
    if site.direction is Direction.LR:
        cell = _cell_at(c, site.anchors[0])
        return replace_cell(c, cell, b["x"])
    _, edge = site.detail
    return insert_cell(c, edge, ((), (), ()))


def _m_inverse_enumerable(site):
    if site.direction is Direction.RL:
        return True
    b = site.binding_map()
    return b["x"] == () and b["y"] == ()


# ---------------------------------------------------------------------------
# D: distribute a majority over a nested majority


def _single_cell(chain: Chain) -> Optional[CellT]:
    if len(chain) == 1 and isinstance(chain[0], CellT):
        return chain[0]
    return None


def _d_match(c, direction, cells):
    sites = []
    if direction is Direction.LR:
        for cell in cells:
            inner = _single_cell(cell.chains[2])
            if inner is not None:
                sites.append(
                    _site(
                        "D",
                        direction,
                        c,
                        (cell.copy_id, cell.merge_id),
                        (
                            ("x", cell.chains[0]),
                            ("y", cell.chains[1]),
                            ("u", inner.branches[0]),
                            ("v", inner.branches[1]),
                            ("z", inner.branches[2]),
                        ),
                    )
                )
    else:
        for cell in cells:
            first = _single_cell(cell.chains[0])
            second = _single_cell(cell.chains[1])
            if first is None or second is None:
                continue
            if first.branches[0] == second.branches[0] and first.branches[1] == second.branches[1]:
                sites.append(
                    _site(
                        "D",
                        direction,
                        c,
                        (cell.copy_id, cell.merge_id),
                        (
                            ("x", first.branches[0]),
                            ("y", first.branches[1]),
                            ("u", first.branches[2]),
                            ("v", second.branches[2]),
                            ("z", cell.chains[2]),
                        ),
                    )
                )
    return sites


def _d_apply(c, site):
    b = site.binding_map()
    cell = _cell_at(c, site.anchors[0])
    if site.direction is Direction.LR:
        replacement = _cell(
            _cell(b["x"], b["y"], b["u"]), _cell(b["x"], b["y"], b["v"]), b["z"]
        )
    else:
        replacement = _cell(b["x"], b["y"], _cell(b["u"], b["v"], b["z"]))
    return replace_cell(c, cell, replacement)


# ---------------------------------------------------------------------------
# A: re-associate nested majorities sharing a branch


def _a_match(c, direction, cells):
    sites = []
    nested_pos = 2 if direction is Direction.LR else 0
    for cell in cells:
        inner = _single_cell(cell.chains[nested_pos])
        if inner is None or inner.branches[1] != cell.chains[1]:
            continue
        if direction is Direction.LR:
            binding = (
                ("x", cell.chains[0]),
                ("u", cell.chains[1]),
                ("y", inner.branches[0]),
                ("z", inner.branches[2]),
            )
        else:
            binding = (
                ("x", inner.branches[0]),
                ("u", cell.chains[1]),
                ("y", inner.branches[2]),
                ("z", cell.chains[2]),
            )
        sites.append(_site("A", direction, c, (cell.copy_id, cell.merge_id), binding))
    return sites


def _a_apply(c, site):
    b = site.binding_map()
    cell = _cell_at(c, site.anchors[0])
    if site.direction is Direction.LR:
        replacement = _cell(_cell(b["x"], b["u"], b["y"]), b["u"], b["z"])
    else:
        replacement = _cell(b["x"], b["u"], _cell(b["y"], b["u"], b["z"]))
    return replace_cell(c, cell, replacement)


# ---------------------------------------------------------------------------
# Certification builders


def _build_id(b, variant):
    return _mk(b["base"] + (ShiftT(ZERO),)), _mk(b["base"])


def _build_comp(b, variant):
    phi = b["phi"]
    return (
        _mk(b["base"] + (ShiftT(phi.complemented()),)),
        _mk(b["base"] + (ShiftT(phi), ShiftT(PI))),
    )


def _build_f(b, variant):
    fused = _fuse(b["alpha"], b["beta"])
    return (
        _mk(b["base"] + (ShiftT(b["alpha"]), ShiftT(b["beta"]))),
        _mk(b["base"] + (ShiftT(fused),)),
    )


def _mk_copy3(base: Chain, below: Optional[PhaseParam], on_branches: Optional[PhaseParam]):
    ed = Editor()
    s = ed.add(NodeKind.SOURCE)
    w = ed.build_chain(base, (s, 0))
    if below is not None:
        nid = ed.add(NodeKind.SHIFT, below)
        ed.connect(w[0], w[1], nid, 0)
        w = (nid, 0)
    k = ed.add(NodeKind.COPY)
    ed.connect(w[0], w[1], k, 0)
    outs = []
    for port in range(3):
        wire = (k, port)
        if on_branches is not None:
            nid = ed.add(NodeKind.SHIFT, on_branches)
            ed.connect(wire[0], wire[1], nid, 0)
            wire = (nid, 0)
        o = ed.add(NodeKind.OUTPUT)
        ed.connect(wire[0], wire[1], o, 0)
        outs.append(o)
    ed.outputs = outs
    return ed.finish()


def _build_c1(b, variant):
    return (
        _mk_copy3(b["base"], b["phi"], None),
        _mk_copy3(b["base"], None, b["phi"]),
    )


def _mk_nested_copies(base: Chain, inner_branch: int):
    ed = Editor()
    s = ed.add(NodeKind.SOURCE)
    w = ed.build_chain(base, (s, 0))
    a = ed.add(NodeKind.COPY)
    ed.connect(w[0], w[1], a, 0)
    bnode = ed.add(NodeKind.COPY)
    ed.connect(a, inner_branch, bnode, 0)
    leaves = _C2_LHS_LEAVES if inner_branch == 0 else _C2_RHS_LEAVES
    outs = []
    for name in leaves:
        owner = a if name[0] == "A" else bnode
        o = ed.add(NodeKind.OUTPUT)
        ed.connect(owner, int(name[1]), o, 0)
        outs.append(o)
    ed.outputs = outs
    return ed.finish()


def _build_c2(b, variant):
    return _mk_nested_copies(b["base"], 0), _mk_nested_copies(b["base"], 2)


def _build_cm(b, perm):
    chains = (b["x"], b["y"], b["z"])
    permuted = [None, None, None]
    for p in range(3):
        permuted[perm[p]] = chains[p]
    return _mk(_cell(*chains)), _mk(_cell(*permuted))


def _build_ch(b, pos):
    arr = [None, None, None]
    arr[pos] = b["x"]
    rest = [p for p in range(3) if p != pos]
    arr[rest[0]] = (ShiftT(b["phi"]),)
    arr[rest[1]] = (ShiftT(b["theta"]),)
    return _mk(_cell(*arr)), _mk(b["x"])


def _build_ch2(b, pair):
    i, j = pair
    arr = [None, None, None]
    arr[i] = b["x"]
    arr[j] = b["x"] + (ShiftT(PI),)
    arr[3 - i - j] = b["w"]
    return _mk(_cell(*arr)), _mk(b["w"])


def _build_m(b, pair):
    i, j = pair
    arr = [None, None, None]
    arr[i] = b["x"]
    arr[j] = b["x"]
    arr[3 - i - j] = b["y"]
    return _mk(_cell(*arr)), _mk(b["x"])


def _build_d(b, variant):
    lhs = _cell(b["x"], b["y"], _cell(b["u"], b["v"], b["z"]))
    rhs = _cell(_cell(b["x"], b["y"], b["u"]), _cell(b["x"], b["y"], b["v"]), b["z"])
    return _mk(lhs), _mk(rhs)


def _build_a(b, variant):
    lhs = _cell(b["x"], b["u"], _cell(b["y"], b["u"], b["z"]))
    rhs = _cell(_cell(b["x"], b["u"], b["y"]), b["u"], b["z"])
    return _mk(lhs), _mk(rhs)


# ---------------------------------------------------------------------------
# The library

_VX, _VY, _VZ, _VU = Var("x"), Var("y"), Var("z"), Var("u")


def _definitions() -> tuple[RewriteRule, ...]:
    wire = lambda n: MetaVar(n, "wire")
    phase = lambda n, co=False: MetaVar(n, "phase", const_only=co)
    return (
        RewriteRule(
            name="ID",
            provenance="base",
            metavars=(wire("base"),),
            description="a zero phase shift is the identity wire",
            readings=((Xor(_VX, Const(0)), _VX),),
            variants=(None,),
            build=_build_id,
            matcher=_id_match,
            applier=_id_apply,
        ),
        RewriteRule(
            name="Comp",
            provenance="base",
            metavars=(wire("base"), phase("phi", co=True)),
            description="a complemented constant shift expands to the constant followed by pi",
            readings=((Not(_VX), Xor(_VX, Const(1))),),
            variants=(None,),
            build=_build_comp,
            matcher=_comp_match,
            applier=_comp_apply,
        ),
        RewriteRule(
            name="F",
            provenance="base",
            metavars=(wire("base"), phase("alpha"), phase("beta")),
            description="consecutive shifts fuse by phase addition (when the sum is a single shift)",
            readings=((Xor(Xor(_VX, _VY), _VZ), Xor(_VX, Xor(_VY, _VZ))),),
            variants=(None,),
            build=_build_f,
            matcher=_f_match,
            applier=_f_apply,
            side_condition=lambda b: _fuse(b["alpha"], b["beta"]) is not None,
        ),
        RewriteRule(
            name="C1",
            provenance="base",
            metavars=(wire("base"), phase("phi")),
            description="a shift below a copy equals the same shift on all three branches",
            readings=(),
            variants=(None,),
            build=_build_c1,
            matcher=_c1_match,
            applier=_c1_apply,
        ),
        RewriteRule(
            name="C2",
            provenance="base",
            metavars=(wire("base"),),
            description="nested copies re-associate; all five leaves carry the same wave",
            readings=(),
            variants=(None,),
            build=_build_c2,
            matcher=_c2_match,
            applier=_c2_apply,
        ),
        RewriteRule(
            name="CM",
            provenance="base",
            metavars=(wire("x"), wire("y"), wire("z")),
            description="merge inputs commute: all six input orders are equal",
            readings=(
                (And(_VX, _VY), And(_VY, _VX)),
                (Or(_VX, _VY), Or(_VY, _VX)),
            ),
            variants=PERMS,
            build=_build_cm,
            matcher=_cm_match,
            applier=_cm_apply,
        ),
        RewriteRule(
            name="D",
            provenance="base",
            metavars=(wire("x"), wire("y"), wire("u"), wire("v"), wire("z")),
            description="a majority distributes over a nested majority",
            readings=(
                (And(_VX, Or(_VY, _VZ)), Or(And(_VX, _VY), And(_VX, _VZ))),
                (Or(_VX, And(_VY, _VZ)), And(Or(_VX, _VY), Or(_VX, _VZ))),
            ),
            variants=(None,),
            build=_build_d,
            matcher=_d_match,
            applier=_d_apply,
        ),
        RewriteRule(
            name="M",
            provenance="base",
            metavars=(wire("x"), wire("y")),
            description="a majority with a duplicated branch collapses to that branch",
            readings=((Maj(_VX, _VX, _VY), _VX),),
            variants=_M_PAIRS,
            build=_build_m,
            matcher=_m_match,
            applier=_m_apply,
            inverse_enumerable=_m_inverse_enumerable,
        ),
        RewriteRule(
            name="A",
            provenance="derived",
            metavars=(wire("x"), wire("u"), wire("y"), wire("z")),
            description="nested majorities sharing a branch re-associate",
            readings=((Maj(_VX, _VU, Maj(_VY, _VU, _VZ)), Maj(Maj(_VX, _VU, _VY), _VU, _VZ)),),
            variants=(None,),
            build=_build_a,
            matcher=_a_match,
            applier=_a_apply,
        ),
        RewriteRule(
            name="CH",
            provenance="base",
            metavars=(wire("x"), phase("phi", co=True), phase("theta", co=True)),
            description="two opposite constant branches cancel out of a majority",
            readings=(
                (Or(_VX, Const(0)), _VX),
                (And(_VX, Const(1)), _VX),
            ),
            variants=(0, 1, 2),
            build=_build_ch,
            matcher=_ch_match,
            applier=_ch_apply,
            side_condition=lambda b: b["phi"] != b["theta"],
            inverse_enumerable=_ch_inverse_enumerable,
        ),
        RewriteRule(
            name="CH2",
            provenance="derived",
            metavars=(wire("x"), wire("w")),
            description="a branch and its complement cancel out of a majority",
            readings=(
                (Or(_VX, Not(_VX)), Const(1)),
                (And(_VX, Not(_VX)), Const(0)),
            ),
            variants=_CH2_PAIRS,
            build=_build_ch2,
            matcher=_ch2_match,
            applier=_ch2_apply,
            inverse_enumerable=_ch2_inverse_enumerable,
        ),
    )


_DEFINITIONS: Optional[tuple[RewriteRule, ...]] = None
_CERTIFIED: Optional[tuple[RewriteRule, ...]] = None


def rule_definitions() -> tuple[RewriteRule, ...]:
    """The rule library without the certification gate (for reporting tools)."""
    global _DEFINITIONS
    if _DEFINITIONS is None:
        _DEFINITIONS = _definitions()
    return _DEFINITIONS


def _binding_grid(metavars: tuple[MetaVar, ...]):
    names = []
    options = []
    fresh = 0
    for mv in metavars:
        names.append(mv.name)
        if mv.sort == "phase":
            opts = [ZERO, PI]
            if not mv.const_only:
                fresh += 1
                opts.append(PhaseParam.var(f"m{fresh}"))
        else:
            fresh += 1
            opts = [(ShiftT(PhaseParam.var(f"m{fresh}")),)]
        options.append(opts)
    for combo in itertools.product(*options):
        yield dict(zip(names, combo))


def _binding_desc(binding) -> str:
    parts = []
    for name, value in binding.items():
        if isinstance(value, tuple):
            parts.append(f"{name}={format_chain(value)}")
        else:
            parts.append(f"{name}={value}")
    return " ".join(parts)


def check_soundness(rule: RewriteRule) -> Certification:
    """Exhaustively certify one rule by truth-table comparison of both sides.

    Phase metavariables range over {0, pi} plus a fresh variable (constants
    only when the rule demands it); wire metavariables become fresh variable
    wires. The first failing instantiation is reported with its assignment.
    """
    instances = 0
    rows = 0
    for variant in rule.variants:
        for binding in _binding_grid(rule.metavars):
            if rule.side_condition is not None and not rule.side_condition(binding):
                continue
            lhs, rhs = rule.build(binding, variant)
            union = list(variables(lhs))
            for v in variables(rhs):
                if v not in union:
                    union.append(v)
            t_lhs = truth_table(lhs, vars=union)
            t_rhs = truth_table(rhs, vars=union)
            instances += 1
            rows += len(t_lhs.rows)
            if t_lhs != t_rhs:
                for i, (a, b) in enumerate(zip(t_lhs.rows, t_rhs.rows)):
                    if a != b:
                        detail = (
                            f"variant={variant!r} {_binding_desc(binding)} "
                            f"assignment={t_lhs.assignment_for_row(i)} lhs={a} rhs={b}"
                        )
                        return Certification(rule.name, False, instances, rows, detail)
    return Certification(rule.name, True, instances, rows)


def all_rules() -> tuple[RewriteRule, ...]:
    """The certified rule library. Fails hard if any rule does not certify."""
    global _CERTIFIED
    if _CERTIFIED is None:
        defs = rule_definitions()
        for rule in defs:
            cert = check_soundness(rule)
            if not cert.ok:
                raise SoundnessError(
                    f"rule {rule.name} failed certification: {cert.counterexample}"
                )
        _CERTIFIED = defs
    return _CERTIFIED


_BY_NAME: Optional[dict[str, RewriteRule]] = None


def rule_by_name(name: str) -> RewriteRule:
    global _BY_NAME
    if _BY_NAME is None:
        _BY_NAME = {rule.name: rule for rule in all_rules()}
    if name not in _BY_NAME:
        raise KeyError(f"unknown rule {name!r}")
    return _BY_NAME[name]


def base_rules() -> tuple[RewriteRule, ...]:
    return tuple(r for r in all_rules() if r.provenance == "base")


def boolean_reading(rule: RewriteRule) -> tuple[tuple[BoolExpr, BoolExpr], ...]:
    """The Boolean law(s) a rule encodes; empty for purely structural rules."""
    return rule.readings
