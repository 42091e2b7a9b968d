"""Polynomial kernel for crossing removal by splitting at most k bottom vertices.

Pipeline:

1. Bottom vertices with three or more non-leaf neighbours must be split in
   every solution; they are removed and charged to the budget.
2. Leaves hanging off a vertex of degree at least three are removed.  A
   vertex that would be left with exactly one neighbour keeps one of its
   leaves, otherwise it would turn into a leaf itself and free a spine slot
   at its remaining neighbour.
3. Degree checks reject instances needing more splits than the budget.
4. Outside the core (top vertices of degree >= 3 plus their neighbours)
   every vertex has degree <= 2, so the rest is paths and cycles.  Cycles
   each cost one split and are removed, free path components are removed,
   and long paths hanging off the core are shortened to ``2k + 5`` vertices
   by deleting a middle top vertex and identifying its two bottom neighbours.

Every removal is recorded in a :class:`ReductionTrace` so that a solution of
the kernel can be lifted back to the input graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from collections.abc import Callable, Container, Iterable
from typing import Union

from .graph import BipartiteGraph, GraphError, Side, gc_paused, merge_bottom_in_place
from .solution import NoCertificate


# -- trace records ----------------------------------------------------------


@dataclass(frozen=True)
class RemovedForced:
    vertex: int
    label: str
    neighbors: tuple[int, ...]


@dataclass(frozen=True)
class RemovedLeaf:
    vertex: int
    side: Side
    label: str
    neighbor: int


@dataclass(frozen=True)
class RemovedCycle:
    vertices: tuple[int, ...]  # cyclic order, starting at the split vertex
    sides: tuple[Side, ...]
    labels: tuple[str, ...]
    split_vertex: int


@dataclass(frozen=True)
class RemovedPathComponent:
    vertices: tuple[int, ...]  # path order
    sides: tuple[Side, ...]
    labels: tuple[str, ...]


@dataclass(frozen=True)
class ShortenedPath:
    removed_top: int
    removed_label: str
    merged_pair: tuple[int, int]
    pair_labels: tuple[str, str]
    pair_neighbors: tuple[tuple[int, ...], tuple[int, ...]]
    merged_id: int
    path: int  # index into KernelState.paths


Action = Union[RemovedForced, RemovedLeaf, RemovedCycle, RemovedPathComponent, ShortenedPath]


class ReductionTrace:
    """Ordered reduction records.

    Bulk segments can be registered as producers with :meth:`defer`; they
    are expanded, in order, the first time :attr:`actions` is read.
    """

    def __init__(self, actions: Iterable[Action] = ()) -> None:
        self._parts: list = [list(actions)]

    @property
    def actions(self) -> list[Action]:
        if len(self._parts) != 1 or callable(self._parts[0]):
            out: list[Action] = []
            for part in self._parts:
                out.extend(part() if callable(part) else part)
            self._parts = [out]
        return self._parts[0]

    def append(self, action: Action) -> None:
        if callable(self._parts[-1]):
            self._parts.append([])
        self._parts[-1].append(action)

    def defer(self, producer: Callable[[], Iterable[Action]]) -> None:
        self._parts.append(producer)

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReductionTrace):
            return NotImplemented
        return self.actions == other.actions

    def __repr__(self) -> str:
        return f"ReductionTrace({len(self)} actions)"

    def of_type(self, kind: type) -> list:
        return [a for a in self.actions if isinstance(a, kind)]


@dataclass(frozen=True)
class PathRecord:
    """A shortened core-attached path.

    ``original`` lists the path in the unshortened graph.  Original positions
    ``lo..hi`` (both bottom vertices) collapsed into the single kernel vertex
    ``merged``; everything else kept its id.
    """

    original: tuple[int, ...]
    lo: int
    hi: int
    merged: int

    @property
    def kernel_sequence(self) -> tuple[int, ...]:
        return self.original[: self.lo] + (self.merged,) + self.original[self.hi + 1 :]


@dataclass
class KernelState:
    graph: BipartiteGraph
    budget: int
    core: set[int] = field(default_factory=set)
    forced_splits: set[int] = field(default_factory=set)  # includes cycle_splits
    cycle_splits: set[int] = field(default_factory=set)
    budgets: dict[str, int] = field(default_factory=dict)
    paths: list[PathRecord] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)


@dataclass
class Kernel:
    state: KernelState
    trace: ReductionTrace

    @property
    def graph(self) -> BipartiteGraph:
        return self.state.graph


# -- bounds -----------------------------------------------------------------


def kernel_bound(k1: int, k2: int) -> int:
    """Vertex bound for the kernel graph in terms of both reduced budgets."""
    if k1 < 0 or k2 < 0:
        return 0
    return math.comb(2 * k1 * (k1 + 2), 2) * (k1 + 2) * (2 * k2 + 5)


def core_bound(k: int) -> int:
    # at most 2k high-degree tops, each with at most k + 2 neighbours
    return 2 * k * (k + 3)


# -- rule 1 -----------------------------------------------------------------


def compute_forced_split_set(g: BipartiteGraph) -> set[int]:
    adj = g.adjacency
    forced = set()
    for b in g.bottom_vertices:
        nbrs = adj[b]
        if len(nbrs) < 3:
            continue
        heavy = 0
        for t in nbrs:
            if len(adj[t]) >= 2:
                heavy += 1
                if heavy == 3:
                    forced.add(b)
                    break
    return forced


def _leaves_to_remove(g: BipartiteGraph, forced: set[int] = frozenset()) -> list[tuple[int, int]]:
    """(leaf, neighbour) pairs of the graph minus ``forced`` to remove.

    Leaves of vertices of degree >= 3 go, except that a vertex which would
    be left with exactly one neighbour keeps its smallest leaf (see module doc).
    """
    adj = g.adjacency
    lost: dict[int, int] = {}
    for b in forced:
        for t in adj[b]:
            lost[t] = lost.get(t, 0) + 1

    def deg(v: int) -> int:
        return len(adj[v]) - lost.get(v, 0)

    by_hub: dict[int, list[int]] = {}
    for v, nbrs in adj.items():
        if v in forced:
            continue
        if v in lost:
            if len(nbrs) - lost[v] != 1:
                continue
            u = next(x for x in nbrs if x not in forced)
        elif len(nbrs) == 1:
            (u,) = nbrs
        else:
            continue
        if deg(u) >= 3:
            by_hub.setdefault(u, []).append(v)
    removed = []
    for u, leaves in by_hub.items():
        if deg(u) - len(leaves) == 1:
            leaves.remove(min(leaves))
        removed.extend((v, u) for v in leaves)
    removed.sort()
    return removed


def apply_rule1(
    g: BipartiteGraph, k: int, forced: set[int] | None = None
) -> tuple[KernelState, ReductionTrace]:
    if k < 0:
        raise ValueError("k must be non-negative")
    if forced is None:
        forced = compute_forced_split_set(g)
    adj, labels, side = g.adjacency, g.labels, g.side
    trace = ReductionTrace()
    for v in sorted(forced):
        trace.append(RemovedForced(v, labels[v], tuple(sorted(adj[v]))))
    leaves = _leaves_to_remove(g, forced)
    for v, u in leaves:
        trace.append(RemovedLeaf(v, side(v), labels[v], u))
    h = g.without(set(forced).union(v for v, _ in leaves))
    hadj = h.adjacency
    for b in h.bottom_vertices:
        if len(hadj[b]) > 2:
            raise AssertionError(f"bottom vertex {h.labels[b]} still has degree {len(hadj[b])}")
    state = KernelState(
        graph=h,
        budget=k - len(forced),
        forced_splits=set(forced),
        budgets={"k": k, "k1": k - len(forced)},
    )
    return state, trace


def check_top_degree(state: KernelState) -> bool:
    """Every top vertex has degree at most budget + 2."""
    limit = state.budget + 2
    adj = state.graph.adjacency
    return all(len(adj[t]) <= limit for t in state.graph.top_vertices)


def check_high_degree_count(state: KernelState) -> bool:
    """At most 2 * budget top vertices of degree >= 3."""
    adj = state.graph.adjacency
    high = sum(1 for t in state.graph.top_vertices if len(adj[t]) >= 3)
    return high <= 2 * state.budget


def extract_core(state: KernelState) -> set[int]:
    g = state.graph
    adj = g.adjacency
    high = [t for t in g.top_vertices if len(adj[t]) >= 3]
    core = set(high)
    for t in high:
        core |= adj[t]
    k = state.budget
    checks_hold = len(high) <= 2 * k and all(len(adj[t]) <= k + 2 for t in high)
    if checks_hold and len(core) > core_bound(k):
        raise AssertionError(f"core has {len(core)} vertices, bound {core_bound(k)}")
    return core


# -- rule 2 -----------------------------------------------------------------


def _noncore_pieces(g: BipartiteGraph, core: set[int]) -> list[tuple[list[int], bool]]:
    """Components of the graph outside the core, as (ordered vertices, is_cycle).

    Outside the core every vertex has degree <= 2, so components are paths
    (walked from an end, preferring the smallest end attached to the core)
    and cycles (walked from their smallest bottom vertex).  Pieces are
    ordered by their smallest vertex.
    """
    adj = g.adjacency
    side = g.side
    inner: dict[int, int] = {}
    for v, nbrs in adj.items():
        if v not in core:
            inner[v] = sum(1 for u in nbrs if u not in core) if core else len(nbrs)
    seen: set[int] = set()
    pieces = []
    for v, d in inner.items():
        if d > 1 or v in seen:
            continue
        seq = _walk(adj, v, inner)
        seen.update(seq)
        ends = (seq[0], seq[-1])
        attached = [e for e in ends if len(adj[e]) > inner[e]]
        start = min(attached) if attached else min(ends)
        if start != seq[0]:
            seq.reverse()
        pieces.append((seq, False))
    for v, d in inner.items():
        if v in seen:
            continue
        ring = _walk(adj, v, inner)
        seen.update(ring)
        start = min(u for u in ring if side(u) is Side.BOTTOM)
        pieces.append((_walk(adj, start, inner, len(ring)), True))
    pieces.sort(key=lambda p: min(p[0]))
    return pieces


def _walk(
    adj: dict[int, set[int]],
    start: int,
    noncore: Container[int],
    size: int | None = None,
) -> list[int]:
    """Follow non-core vertices from ``start``, taking the smaller unvisited neighbour.

    Stops at a path end, or after ``size`` vertices on a cycle (or when the
    walk returns to ``start``).
    """
    order = [start]
    prev = None
    cur = start
    while size is None or len(order) < size:
        nxt = [u for u in adj[cur] if u != prev and u in noncore]
        if not nxt:
            break
        u = min(nxt)
        if u == start:
            break
        prev, cur = cur, u
        order.append(cur)
    return order


def _shorten(
    g: BipartiteGraph,
    seq: list[int],
    threshold: int,
    path_index: int,
    trace: ReductionTrace,
) -> PathRecord:
    """Shorten ``seq`` in place in ``g`` until it has at most ``threshold`` vertices."""
    side = g.side
    labels = {v: g.labels[v] for v in seq}
    L = len(seq)
    lo = hi = -1
    merged = -1
    steps = 0

    def at(j: int) -> int:
        if steps == 0 or j < lo:
            return seq[j]
        if j == lo:
            return merged
        return seq[j + 2 * steps]

    while L - 2 * steps > threshold:
        n = L - 2 * steps
        c = (n - 1) / 2
        best = None
        for j in range(max(1, math.floor(c) - 2), min(n - 1, math.ceil(c) + 3)):
            v = at(j)
            if j != lo and side(v) is Side.TOP:
                key = (abs(j - c), v)
                if best is None or key < best[0]:
                    best = (key, j)
        assert best is not None
        j = best[1]
        t = at(j)
        a, b = at(j - 1), at(j + 1)
        if steps == 0:
            new_lo, new_hi = j - 1, j + 1
        elif j - 1 == lo:
            new_lo, new_hi = lo, j + 1 + 2 * steps
        elif j + 1 == lo:
            new_lo, new_hi = j - 1, hi
        else:
            raise AssertionError("shortening step left the merged block")
        pair_nbrs = (tuple(sorted(g.neighbors(a))), tuple(sorted(g.neighbors(b))))
        pair_labels = (g.labels[a], g.labels[b])
        t_label = g.labels[t]
        g.remove_vertex(t)
        label = f"{labels[seq[new_lo]]}..{labels[seq[new_hi]]}"
        m = merge_bottom_in_place(g, a, b, label)
        trace.append(
            ShortenedPath(t, t_label, (a, b), pair_labels, pair_nbrs, m, path_index)
        )
        lo, hi, merged = new_lo, new_hi, m
        steps += 1
    return PathRecord(tuple(seq), lo, hi, merged)


def apply_rule2(
    state: KernelState, trace: ReductionTrace, *, in_place: bool = False
) -> tuple[KernelState, ReductionTrace]:
    g = state.graph if in_place else state.graph.copy()
    if not in_place:
        trace = ReductionTrace(trace.actions)
    core = extract_core(KernelState(g, state.budget)) if not state.core else set(state.core)
    forced = set(state.forced_splits)
    pieces = _noncore_pieces(g, core)

    budget = state.budget
    cycles = [seq for seq, is_cycle in pieces if is_cycle]
    for seq in cycles:
        z = seq[0]
        rec = RemovedCycle(
            tuple(seq), tuple(g.side(v) for v in seq), tuple(g.labels[v] for v in seq), z
        )
        g.drop_components(seq)
        trace.append(rec)
        forced.add(z)
        budget -= 1

    adj = g.adjacency
    attached = []
    for seq, is_cycle in pieces:
        if is_cycle:
            continue
        if any(u in core for u in adj[seq[0]]) or any(u in core for u in adj[seq[-1]]):
            attached.append(seq)
            continue
        rec = RemovedPathComponent(
            tuple(seq), tuple(g.side(v) for v in seq), tuple(g.labels[v] for v in seq)
        )
        g.drop_components(seq)
        trace.append(rec)

    paths = list(state.paths)
    shortened = 0
    if budget >= 0:
        threshold = 2 * budget + 5
        for seq in attached:
            if len(seq) > threshold:
                rec = _shorten(g, seq, threshold, len(paths), trace)
                paths.append(rec)
                shortened += 1
                assert 2 * budget + 3 <= len(rec.kernel_sequence) <= threshold

    budgets = dict(state.budgets)
    budgets["k2"] = budget
    stats = {
        "core_size": len(core),
        "cycles": len(cycles),
        "attached_paths": len(attached),
        "shortened_paths": shortened,
        "kernel_vertices": len(g),
        "kernel_edges": g.num_edges(),
    }
    new_state = KernelState(
        graph=g,
        budget=budget,
        core=core,
        forced_splits=forced,
        cycle_splits={seq[0] for seq in cycles},
        budgets=budgets,
        paths=paths,
        stats=stats,
    )
    return new_state, trace


# -- pipeline ---------------------------------------------------------------


ENGINES = ("arrays", "reference")


def kernelize(g: BipartiteGraph, k: int, *, engine: str = "arrays") -> Kernel | NoCertificate:
    """Reduce ``(g, k)`` to a kernel, or certify a NO answer.

    ``engine="arrays"`` runs the linear passes over numpy arrays (see
    :mod:`bisplit.fastkernel`); ``engine="reference"`` composes the
    step functions of this module.  Both return identical results.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    with gc_paused():
        if engine == "arrays":
            from .fastkernel import kernelize_arrays

            return kernelize_arrays(g, k)
        return _kernelize_reference(g, k)


def _reject_forced(n_forced: int, k: int, stats: dict[str, int]) -> NoCertificate:
    return NoCertificate(
        "forced splits exceed budget",
        f"{n_forced} bottom vertices have three non-leaf neighbours, k = {k}",
        stats,
    )


def _reject_degree(k1: int, stats: dict[str, int]) -> NoCertificate:
    return NoCertificate(
        "top degree bound", f"a top vertex has degree above k'1 + 2 = {k1 + 2}", stats
    )


def _reject_high_count(k1: int, stats: dict[str, int]) -> NoCertificate:
    return NoCertificate(
        "high-degree top count",
        f"more than 2k'1 = {2 * k1} top vertices of degree >= 3",
        stats,
    )


def _finish(state: KernelState, trace: ReductionTrace, stats: dict[str, int]) -> Kernel | NoCertificate:
    stats.update(state.stats)
    stats["k2"] = state.budget
    if state.budget < 0:
        return NoCertificate(
            "cycles exceed budget",
            f"{state.stats['cycles']} cycles outside the core, k'1 = {state.budgets['k1']}",
            stats,
        )
    bound = kernel_bound(state.budgets["k1"], state.budget)
    stats["kernel_bound"] = bound
    state.stats = stats
    if len(state.graph) > bound:
        raise AssertionError(f"kernel has {len(state.graph)} vertices, bound {bound}")
    return Kernel(state, trace)


def _kernelize_reference(g: BipartiteGraph, k: int) -> Kernel | NoCertificate:
    forced = compute_forced_split_set(g)
    stats: dict[str, int] = {"k": k, "forced": len(forced), "k1": k - len(forced)}
    if len(forced) > k:
        return _reject_forced(len(forced), k, stats)
    state, trace = apply_rule1(g, k, forced)
    if not check_top_degree(state):
        return _reject_degree(state.budget, stats)
    if not check_high_degree_count(state):
        return _reject_high_count(state.budget, stats)
    state.core = extract_core(state)
    state, trace = apply_rule2(state, trace, in_place=True)
    return _finish(state, trace, stats)


def replay_trace(kernel_graph: BipartiteGraph, trace: ReductionTrace) -> BipartiteGraph:
    """Undo every recorded reduction, reconstructing the input graph."""
    g = kernel_graph.copy()
    for act in reversed(trace.actions):
        if isinstance(act, ShortenedPath):
            g.remove_vertex(act.merged_id)
            for v, label in zip(act.merged_pair, act.pair_labels):
                g.add_vertex(Side.BOTTOM, label, vid=v)
            g.add_vertex(Side.TOP, act.removed_label, vid=act.removed_top)
            for v, nbrs in zip(act.merged_pair, act.pair_neighbors):
                for t in nbrs:
                    g.add_edge(t, v)
        elif isinstance(act, (RemovedPathComponent, RemovedCycle)):
            for v, s, label in zip(act.vertices, act.sides, act.labels):
                g.add_vertex(s, label, vid=v)
            seq = act.vertices
            for a, b in zip(seq, seq[1:]):
                g.add_edge(a, b)
            if isinstance(act, RemovedCycle):
                g.add_edge(seq[-1], seq[0])
        elif isinstance(act, RemovedLeaf):
            g.add_vertex(act.side, act.label, vid=act.vertex)
            g.add_edge(act.vertex, act.neighbor)
        elif isinstance(act, RemovedForced):
            g.add_vertex(Side.BOTTOM, act.label, vid=act.vertex)
            for t in act.neighbors:
                g.add_edge(t, act.vertex)
        else:  # pragma: no cover
            raise GraphError(f"unknown trace action {act!r}")
    return g
