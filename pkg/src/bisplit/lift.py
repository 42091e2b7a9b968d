"""Turn a kernel solution into a solution and crossing-free drawing of the input.

The reductions are undone in reverse on a :class:`Canvas`, a crossing-free
drawing of the current split graph.  Bottom positions hold tokens
``(vertex, copy)``; copy 0 is an unsplit vertex and copy ``i >= 1`` is the
``i``-th block of a split vertex.

Reinsertions only ever use two kinds of room:

* a wedge: a new leaf of ``x`` goes right after (or before) a neighbour
  ``y`` of ``x`` when ``x`` is the outermost neighbour of ``y`` on that
  side, or between two neighbours of ``x``;
* the empty space right of everything, for new components.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .biplanarity import Drawing, count_crossings, layout
from .graph import BipartiteGraph, Side
from .kernel import (
    KernelState,
    ReductionTrace,
    RemovedCycle,
    RemovedForced,
    RemovedLeaf,
    RemovedPathComponent,
)
from .solution import Solution, apply_splits, contract_copies

Token = tuple[int, int]


class LiftError(RuntimeError):
    """An invariant of the lifting construction failed (indicates a bug)."""


class Canvas:
    def __init__(self) -> None:
        self.top: list[int] = []
        self.bottom: list[Token] = []
        self.top_adj: dict[int, set[Token]] = {}
        self.bot_adj: dict[Token, set[int]] = {}
        self.blocks: dict[int, list[set[int]]] = {}

    @classmethod
    def from_split_graph(cls, h: BipartiteGraph, d: Drawing) -> Canvas:
        cv = cls()
        tok = {b: h.origin.get(b, (b, 0)) for b in h.bottom_vertices}
        cv.top = list(d.top_order)
        cv.bottom = [tok[b] for b in d.bottom_order]
        for t in h.top_vertices:
            cv.top_adj[t] = {tok[b] for b in h.neighbors(t)}
        for b, x in tok.items():
            cv.bot_adj[x] = set(h.neighbors(b))
        split = defaultdict(dict)
        for b, (v, i) in tok.items():
            if i:
                split[v][i] = set(h.neighbors(b))
        for v, parts in split.items():
            cv.blocks[v] = [parts[i] for i in sorted(parts)]
        return cv

    # -- helpers ------------------------------------------------------------

    def connect(self, t: int, x: Token) -> None:
        self.top_adj.setdefault(t, set()).add(x)
        self.bot_adj.setdefault(x, set()).add(t)

    def disconnect(self, t: int, x: Token) -> None:
        self.top_adj[t].discard(x)
        self.bot_adj[x].discard(t)

    def positions(self) -> tuple[dict[int, int], dict[Token, int]]:
        return (
            {t: i for i, t in enumerate(self.top)},
            {x: i for i, x in enumerate(self.bottom)},
        )

    def rename(self, mapping: dict[int, int]) -> None:
        """Simultaneously rename vertices (both layers) by ``mapping``."""
        if not mapping:
            return
        f = lambda v: mapping.get(v, v)  # noqa: E731
        g = lambda x: (mapping.get(x[0], x[0]), x[1])  # noqa: E731
        self.top = [f(t) for t in self.top]
        self.bottom = [g(x) for x in self.bottom]
        self.top_adj = {f(t): {g(x) for x in xs} for t, xs in self.top_adj.items()}
        self.bot_adj = {g(x): {f(t) for t in ts} for x, ts in self.bot_adj.items()}
        self.blocks = {f(v): [{f(t) for t in b} for b in bl] for v, bl in self.blocks.items()}

    def append_path(self, seq: list[int | Token], is_top: list[bool]) -> None:
        """Append a path as a new component at the right end."""
        for v, top in zip(seq, is_top):
            if top:
                self.top.append(v)
                self.top_adj.setdefault(v, set())
            else:
                self.bottom.append(v)
                self.bot_adj.setdefault(v, set())
        for (a, ta), (b, _) in zip(zip(seq, is_top), zip(seq[1:], is_top[1:])):
            if ta:
                self.connect(a, b)
            else:
                self.connect(b, a)

    def to_solution(self) -> Solution:
        return Solution(
            {
                v: tuple(frozenset((t, v) for t in block) for block in parts)
                for v, parts in sorted(self.blocks.items())
            }
        )


# -- slot finding -------------------------------------------------------------


def _slot(x, adj_x, pos_other, adj_other, pos_self):
    """Where a new leaf of ``x`` may go on the opposite layer.

    Returns ("after"|"before", anchor) or None when ``x`` has a single
    neighbour and sits strictly inside that neighbour's fan.
    """
    nbrs = sorted(adj_x, key=pos_other.__getitem__)
    right, left = nbrs[-1], nbrs[0]
    if max(adj_other[right], key=pos_self.__getitem__) == x:
        return ("after", right)
    if min(adj_other[left], key=pos_self.__getitem__) == x:
        return ("before", left)
    if len(nbrs) >= 2:
        return ("after", left)
    return None


def _splice(order: list, before: dict, after: dict, moved: set, tail: list) -> list:
    """Insert ``before[v]`` / ``after[v]`` around each ``v`` of ``order`` in one pass."""
    out = []
    for v in order:
        if v in moved:
            continue
        out.extend(before.get(v, ()))
        out.append(v)
        out.extend(after.get(v, ()))
    out.extend(tail)
    return out


def _rebuild(order: list, slots: dict, pos_opposite, tail: list) -> list:
    """Splice grouped leaf insertions into ``order``.

    ``slots`` maps (side, anchor) to (neighbour, new item) pairs; items in one
    gap are ordered by their neighbour's position on the opposite layer.
    """
    before: dict = {}
    after: dict = {}
    for (where, anchor), items in slots.items():
        ordered = [x for _, x in sorted(items, key=lambda p: pos_opposite[p[0]])]
        (before if where == "before" else after)[anchor] = ordered
    return _splice(order, before, after, set(), tail)


def _attach_bottom_leaves(cv: Canvas, wanted: dict[int, list[Token]]) -> None:
    """Give each top ``t`` the new bottom leaves ``wanted[t]``."""
    tpos, bpos = cv.positions()
    slots: dict = defaultdict(list)
    moved: set[int] = set()
    tail_top: list[int] = []
    tail_bottom: list[Token] = []
    for t in sorted(wanted, key=tpos.__getitem__):
        leaves = wanted[t]
        if not cv.top_adj[t]:
            moved.add(t)
            tail_top.append(t)
            tail_bottom.extend(leaves)
        else:
            slot = _slot(t, cv.top_adj[t], bpos, cv.bot_adj, tpos)
            if slot is None:
                raise LiftError(f"no room for a leaf at top vertex {t}")
            slots[slot].extend((t, x) for x in leaves)
        for x in leaves:
            cv.connect(t, x)
    cv.bottom = _rebuild(cv.bottom, slots, tpos, tail_bottom)
    cv.top = [t for t in cv.top if t not in moved] + tail_top


def _attach_top_leaves(cv: Canvas, wanted: dict[Token, list[int]]) -> None:
    tpos, bpos = cv.positions()
    slots: dict = defaultdict(list)
    moved: set[Token] = set()
    tail_top: list[int] = []
    tail_bottom: list[Token] = []
    for x in sorted(wanted, key=bpos.__getitem__):
        leaves = wanted[x]
        if not cv.bot_adj[x]:
            moved.add(x)
            tail_bottom.append(x)
            tail_top.extend(leaves)
        else:
            slot = _slot(x, cv.bot_adj[x], tpos, cv.top_adj, bpos)
            if slot is None:
                raise LiftError(f"no room for a leaf at bottom vertex {x}")
            slots[slot].extend((x, t) for t in leaves)
        for t in leaves:
            cv.connect(t, x)
    cv.top = _rebuild(cv.top, slots, bpos, tail_top)
    cv.bottom = [x for x in cv.bottom if x not in moved] + tail_bottom


def _free_fan_ends(cv: Canvas, needy: set[int]) -> None:
    """Move degree-1 tops that are about to gain leaves to an end of their fan.

    Tops strictly inside a bottom vertex's fan must be leaves; a top that is
    about to become a non-leaf has to sit at one of the two fan ends.
    """
    tpos, _ = cv.positions()
    by_hub: dict[Token, list[int]] = defaultdict(list)
    for t in needy:
        if len(cv.top_adj[t]) == 1:
            (x,) = cv.top_adj[t]
            by_hub[x].append(t)
    for x, tops in sorted(by_hub.items(), key=lambda kv: min(tpos[t] for t in kv[1])):
        fan = sorted(cv.bot_adj[x], key=tpos.__getitem__)
        if len(fan) <= 2:
            continue
        ends = [fan[0], fan[-1]]
        inner = [t for t in tops if t not in ends]
        free = [e for e in ends if len(cv.top_adj[e]) == 1 and e not in tops]
        if len(inner) > len(free):
            raise LiftError(f"fan of {x} cannot host {len(tops)} new spine vertices")
        for t, e in zip(sorted(inner, key=tpos.__getitem__), free):
            i, j = tpos[t], tpos[e]
            cv.top[i], cv.top[j] = e, t
            tpos[t], tpos[e] = j, i


# -- the two lifting stages -----------------------------------------------------


def _expand_paths(cv: Canvas, state: KernelState) -> None:
    """Undo path shortening.

    Each shortened path is re-expanded at an unsplit bottom vertex ``u`` of
    degree 2: path vertices before ``u`` take the original ids of the same
    index, ``u`` becomes the start of the removed stretch and later vertices
    shift by its length.  The stretch is laid out as a staircase between
    ``u`` and its two top neighbours.
    """
    rename: dict[int, int] = {}
    chains = []
    for rec in state.paths:
        seq = rec.kernel_sequence
        span = rec.hi - rec.lo
        anchor = None
        for i in sorted(range(len(seq)), key=lambda j: (abs(j - rec.lo), j)):
            if i % 2 != rec.lo % 2 or seq[i] in cv.blocks:
                continue
            if len(cv.bot_adj.get((seq[i], 0), ())) == 2:
                anchor = i
                break
        if anchor is None:
            raise LiftError("shortened path has no unsplit degree-2 bottom vertex")
        for j, y in enumerate(seq):
            rename[y] = rec.original[j] if j <= anchor else rec.original[j + span]
        chains.append(rec.original[anchor - 1 : anchor + span + 2])
    cv.rename(rename)

    tpos, _ = cv.positions()
    top_before: dict = {}
    top_after: dict = {}
    bottom_before: dict = {}
    bottom_after: dict = {}
    for chain in chains:
        ta, tb = chain[0], chain[-1]
        u = (chain[1], 0)
        bots = [(b, 0) for b in chain[1:-1:2]]
        tops = list(chain[2:-1:2])
        cv.disconnect(tb, u)
        for j, t in enumerate(tops):
            cv.connect(t, bots[j])
            cv.connect(t, bots[j + 1])
        cv.connect(tb, bots[-1])
        if tpos[ta] < tpos[tb]:
            top_after[ta] = tops
            bottom_after[u] = bots[1:]
        else:
            top_before[ta] = tops[::-1]
            bottom_before[u] = bots[:0:-1]
    cv.top = _splice(cv.top, top_before, top_after, set(), [])
    cv.bottom = _splice(cv.bottom, bottom_before, bottom_after, set(), [])


def lift_rule2(cv: Canvas, trace: ReductionTrace, state: KernelState) -> Canvas:
    """Undo path shortening, then re-add removed path and cycle components."""
    if state.paths:
        _expand_paths(cv, state)
    for act in trace.actions:
        if isinstance(act, RemovedPathComponent):
            cv.append_path(
                [v if s is Side.TOP else (v, 0) for v, s in zip(act.vertices, act.sides)],
                [s is Side.TOP for s in act.sides],
            )
        elif isinstance(act, RemovedCycle):
            # cut open at the split vertex: copy 1 - v1 - ... - v_last - copy 2
            z, rest = act.vertices[0], list(act.vertices[1:])
            cv.blocks[z] = [{rest[0]}, {rest[-1]}]
            seq = [(z, 1)] + [v if s is Side.TOP else (v, 0) for v, s in zip(rest, act.sides[1:])]
            seq.append((z, 2))
            cv.append_path(seq, [False] + [s is Side.TOP for s in act.sides[1:]] + [False])
    return cv


def lift_rule1(cv: Canvas, trace: ReductionTrace) -> Canvas:
    """Undo leaf removal, then reinsert forced splits as one leaf copy per edge."""
    leaves = trace.of_type(RemovedLeaf)
    bottom_leaves: dict[int, list[Token]] = defaultdict(list)
    top_leaves: dict[Token, list[int]] = defaultdict(list)
    split_leaves: list[tuple[int, int]] = []
    for act in leaves:
        if act.side is Side.BOTTOM:
            bottom_leaves[act.neighbor].append((act.vertex, 0))
        elif act.neighbor in cv.blocks:
            split_leaves.append((act.vertex, act.neighbor))
        else:
            top_leaves[(act.neighbor, 0)].append(act.vertex)
    if bottom_leaves:
        _attach_bottom_leaves(cv, bottom_leaves)
    if top_leaves:
        _attach_top_leaves(cv, top_leaves)
    for t, b in split_leaves:
        cv.blocks[b].append({t})
        cv.append_path([t, (b, len(cv.blocks[b]))], [True, False])

    wanted: dict[int, list[Token]] = defaultdict(list)
    for act in trace.of_type(RemovedForced):
        cv.blocks[act.vertex] = [{t} for t in act.neighbors]
        for i, t in enumerate(act.neighbors, start=1):
            wanted[t].append((act.vertex, i))
    if wanted:
        _free_fan_ends(cv, set(wanted))
        _attach_bottom_leaves(cv, wanted)
    return cv


# -- driver --------------------------------------------------------------------


@dataclass
class LiftedResult:
    solution: Solution
    split_graph: BipartiteGraph
    drawing: Drawing

    @property
    def crossings(self) -> int:
        return count_crossings(self.split_graph, self.drawing)


def lift(
    kernel_solution: Solution,
    kernel_drawing: Drawing | None,
    trace: ReductionTrace,
    state: KernelState,
    graph: BipartiteGraph,
    k: int | None = None,
) -> LiftedResult:
    hk = apply_splits(state.graph, kernel_solution)
    if kernel_drawing is None:
        kernel_drawing = layout(hk)
    cv = Canvas.from_split_graph(hk, kernel_drawing)
    lift_rule2(cv, trace, state)
    lift_rule1(cv, trace)

    sol = cv.to_solution()
    h = apply_splits(graph, sol)
    token_id = {origin: v for v, origin in h.origin.items()}
    drawing = Drawing(
        tuple(cv.top),
        tuple(token_id[x] if x[1] else x[0] for x in cv.bottom),
    )
    result = LiftedResult(sol, h, drawing)
    crossings = result.crossings
    if crossings:
        raise LiftError(f"lifted drawing has {crossings} crossings")
    if contract_copies(h) != set(graph.edges()):
        raise LiftError("contracting the copies does not give back the input graph")
    if k is not None and len(sol) > k:
        raise LiftError(f"lifted solution splits {len(sol)} vertices, budget {k}")
    return result
