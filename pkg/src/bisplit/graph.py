"""Two-layer bipartite graph container.

Vertices are stable integer ids that are never reused inside one graph
lineage; every vertex belongs to exactly one layer.  Mutating methods act in
place and are meant for the reduction passes, which work on a private copy.
The module-level helpers return fresh graphs.
"""

from __future__ import annotations

import contextlib
import enum
import gc
from collections.abc import Iterable, Iterator


@contextlib.contextmanager
def gc_paused():
    """Suspend cyclic garbage collection while building large graphs.

    Graphs are millions of small sets that never form reference cycles;
    generational collection would rescan them over and over.
    """
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


class Side(enum.Enum):
    TOP = "t"
    BOTTOM = "b"

    @property
    def other(self) -> Side:
        return Side.BOTTOM if self is Side.TOP else Side.TOP


Edge = tuple[int, int]  # (top, bottom)


class GraphError(ValueError):
    """Raised when an operation would break bipartiteness or simplicity."""


class BipartiteGraph:
    """Simple bipartite graph with a top layer ``T`` and a bottom layer ``B``.

    ``origin`` is only populated on graphs produced by splitting; it maps a
    copy id to ``(original vertex, copy index)``.
    """

    __slots__ = ("_adj", "_side", "labels", "origin", "_next_id")

    def __init__(self) -> None:
        self._adj: dict[int, set[int]] = {}
        self._side: dict[int, Side] = {}
        self.labels: dict[int, str] = {}
        self.origin: dict[int, tuple[int, int]] = {}
        self._next_id = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        tops: Iterable[str] = (),
        bottoms: Iterable[str] = (),
    ) -> BipartiteGraph:
        """Build a graph from ``(top name, bottom name)`` pairs.

        Names are unique per layer.  Ids are handed out in order of first
        appearance, tops listed in ``tops`` and bottoms in ``bottoms`` first.
        """
        g = cls()
        top_ids: dict[str, int] = {}
        bottom_ids: dict[str, int] = {}
        for name in tops:
            if name not in top_ids:
                top_ids[name] = g.add_vertex(Side.TOP, name)
        for name in bottoms:
            if name not in bottom_ids:
                bottom_ids[name] = g.add_vertex(Side.BOTTOM, name)
        for t_name, b_name in edges:
            t = top_ids.get(t_name)
            if t is None:
                t = top_ids[t_name] = g.add_vertex(Side.TOP, t_name)
            b = bottom_ids.get(b_name)
            if b is None:
                b = bottom_ids[b_name] = g.add_vertex(Side.BOTTOM, b_name)
            g.add_edge(t, b)
        return g

    @classmethod
    def from_parts(
        cls,
        adj: dict[int, set[int]],
        side: dict[int, Side],
        labels: dict[int, str],
        origin: dict[int, tuple[int, int]] | None = None,
        next_id: int = 0,
    ) -> BipartiteGraph:
        """Adopt prebuilt maps without checks (callers run :meth:`validate` if unsure)."""
        g = cls()
        g._adj, g._side, g.labels = adj, side, labels
        g.origin = origin if origin is not None else {}
        g._next_id = max(next_id, max(adj, default=-1) + 1)
        return g

    def add_vertex(self, side: Side, label: str | None = None, vid: int | None = None) -> int:
        if vid is None:
            vid = self._next_id
        elif vid in self._adj:
            raise GraphError(f"vertex id {vid} already present")
        self._next_id = max(self._next_id, vid + 1)
        self._adj[vid] = set()
        self._side[vid] = side
        self.labels[vid] = label if label is not None else f"{side.value}{vid}"
        return vid

    def add_edge(self, u: int, v: int) -> None:
        if self.side(u) is self.side(v):
            raise GraphError(f"edge {u}-{v} joins two vertices of the same layer")
        if v in self._adj[u]:
            raise GraphError(f"parallel edge {u}-{v}")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self._adj[u].remove(v)
        self._adj[v].remove(u)

    def remove_vertex(self, v: int) -> set[int]:
        """Delete ``v`` in place and return its former neighbours."""
        nbrs = self._adj.pop(v)
        for u in nbrs:
            self._adj[u].discard(v)
        del self._side[v]
        self.labels.pop(v, None)
        self.origin.pop(v, None)
        return nbrs

    def copy(self) -> BipartiteGraph:
        g = BipartiteGraph()
        g._adj = {v: set(n) for v, n in self._adj.items()}
        g._side = dict(self._side)
        g.labels = dict(self.labels)
        g.origin = dict(self.origin)
        g._next_id = self._next_id
        return g

    def without(self, removed: set[int]) -> BipartiteGraph:
        """Copy of the graph minus ``removed``, built in one pass."""
        g = BipartiteGraph()
        adj = {}
        for v, n in self._adj.items():
            if v in removed:
                continue
            adj[v] = set(n) if n.isdisjoint(removed) else n - removed
        g._adj = adj
        g._side = {v: s for v, s in self._side.items() if v not in removed}
        g.labels = {v: s for v, s in self.labels.items() if v not in removed}
        g.origin = {v: o for v, o in self.origin.items() if v not in removed}
        g._next_id = self._next_id
        return g

    def drop_components(self, vs: Iterable[int]) -> None:
        """Delete vertices whose neighbours are all deleted too (whole components)."""
        adj, side, labels, origin = self._adj, self._side, self.labels, self.origin
        for v in vs:
            del adj[v]
            del side[v]
            labels.pop(v, None)
            origin.pop(v, None)

    def fresh_id(self) -> int:
        return self._next_id

    # -- queries ----------------------------------------------------------

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[int]:
        return iter(self._adj)

    @property
    def adjacency(self) -> dict[int, set[int]]:
        """Raw adjacency map; callers must not mutate it."""
        return self._adj

    @property
    def sides(self) -> dict[int, Side]:
        """Raw vertex-to-layer map; callers must not mutate it."""
        return self._side

    def side(self, v: int) -> Side:
        try:
            return self._side[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def neighbors(self, v: int) -> set[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    @property
    def top_vertices(self) -> set[int]:
        return {v for v, s in self._side.items() if s is Side.TOP}

    @property
    def bottom_vertices(self) -> set[int]:
        return {v for v, s in self._side.items() if s is Side.BOTTOM}

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def edges(self) -> list[Edge]:
        return sorted(
            (v, u) for v, s in self._side.items() if s is Side.TOP for u in self._adj[v]
        )

    def num_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def incident_edges(self, v: int) -> list[Edge]:
        if self.side(v) is Side.TOP:
            return sorted((v, u) for u in self._adj[v])
        return sorted((u, v) for u in self._adj[v])

    def name_key(self, v: int) -> tuple[str, str]:
        return (self._side[v].value, self.labels[v])

    def validate(self) -> None:
        """Check the structural invariants; raise :class:`GraphError` on failure."""
        if self._adj.keys() != self._side.keys():
            raise GraphError("adjacency and side maps disagree")
        for v, nbrs in self._adj.items():
            if v in nbrs:
                raise GraphError(f"self-loop at {v}")
            for u in nbrs:
                if u not in self._adj:
                    raise GraphError(f"edge {v}-{u} points at a missing vertex")
                if v not in self._adj[u]:
                    raise GraphError(f"asymmetric edge {v}-{u}")
                if self._side[u] is self._side[v]:
                    raise GraphError(f"edge {v}-{u} inside one layer")
        if self._adj and max(self._adj) >= self._next_id:
            raise GraphError("id counter behind existing ids")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self._adj == other._adj
            and self._side == other._side
            and self.labels == other.labels
        )

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(|T|={len(self.top_vertices)}, "
            f"|B|={len(self.bottom_vertices)}, |E|={self.num_edges()})"
        )


def degree(g: BipartiteGraph, v: int) -> int:
    return g.degree(v)


def connected_components(g: BipartiteGraph) -> list[set[int]]:
    """Components ordered by their smallest vertex id."""
    seen: set[int] = set()
    comps: list[set[int]] = []
    for root in sorted(g):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(comp)
    return comps


def induced_subgraph(g: BipartiteGraph, vs: Iterable[int]) -> BipartiteGraph:
    keep = set(vs)
    missing = keep - set(g)
    if missing:
        raise KeyError(f"unknown vertices {sorted(missing)}")
    h = BipartiteGraph()
    for v in sorted(keep):
        h.add_vertex(g.side(v), g.labels[v], vid=v)
        if v in g.origin:
            h.origin[v] = g.origin[v]
    for v in keep:
        if g.side(v) is Side.TOP:
            for u in g.neighbors(v):
                if u in keep:
                    h.add_edge(v, u)
    h._next_id = max(h._next_id, g.fresh_id())
    return h


def merge_bottom_in_place(g: BipartiteGraph, u: int, v: int, label: str | None = None) -> int:
    """Replace bottom vertices ``u`` and ``v`` by one new vertex; return its id."""
    if u == v:
        raise GraphError("cannot identify a vertex with itself")
    if g.side(u) is not Side.BOTTOM or g.side(v) is not Side.BOTTOM:
        raise GraphError("only bottom vertices can be identified")
    if g.neighbors(u) & g.neighbors(v):
        raise GraphError(f"{u} and {v} share a top neighbour; merging would create a parallel edge")
    if label is None:
        label = f"{g.labels[u]}+{g.labels[v]}"
    nbrs = g.remove_vertex(u) | g.remove_vertex(v)
    w = g.add_vertex(Side.BOTTOM, label)
    for t in nbrs:
        g.add_edge(t, w)
    return w


def identify_bottom_vertices(g: BipartiteGraph, u: int, v: int) -> BipartiteGraph:
    """Return a copy of ``g`` where ``u`` and ``v`` became one bottom vertex."""
    h = g.copy()
    merge_bottom_in_place(h, u, v)
    return h
