"""Caterpillar-forest recognition, crossing-free layout and crossing counting.

A bipartite graph has a crossing-free two-layer drawing exactly when it is a
forest of caterpillars.  The test here is the usual linear one: every
component is a tree, and inside it the non-leaf vertices induce a path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import BipartiteGraph, Side, connected_components


class DrawingError(ValueError):
    pass


@dataclass(frozen=True)
class Drawing:
    """Left-to-right vertex orders of the two layers."""

    top_order: tuple[int, ...] = field(default=())
    bottom_order: tuple[int, ...] = field(default=())

    def check_against(self, g: BipartiteGraph) -> None:
        if sorted(self.top_order) != sorted(g.top_vertices):
            raise DrawingError("top order is not a permutation of the top layer")
        if sorted(self.bottom_order) != sorted(g.bottom_vertices):
            raise DrawingError("bottom order is not a permutation of the bottom layer")


def _spine(g: BipartiteGraph, comp: set[int]) -> list[int] | None:
    """Ordered spine of a tree component, or ``None`` if it is no caterpillar."""
    inner = [v for v in comp if g.degree(v) >= 2]
    if not inner:
        return []
    inner_set = set(inner)
    ends = []
    for v in inner:
        k = sum(1 for u in g.neighbors(v) if u in inner_set)
        if k > 2:
            return None
        if k <= 1:
            ends.append(v)
    if len(inner) == 1:
        return inner
    if len(ends) != 2:
        return None
    path = [min(ends)]
    prev = None
    while True:
        cur = path[-1]
        nxt = [u for u in g.neighbors(cur) if u in inner_set and u != prev]
        if not nxt:
            break
        prev = cur
        path.append(nxt[0])
    return path if len(path) == len(inner) else None


def _component_edges(g: BipartiteGraph, comp: set[int]) -> int:
    return sum(g.degree(v) for v in comp) // 2


def is_biplanar(g: BipartiteGraph) -> bool:
    for comp in connected_components(g):
        if _component_edges(g, comp) != len(comp) - 1:
            return False
        if _spine(g, comp) is None:
            return False
    return True


def layout(g: BipartiteGraph) -> Drawing:
    """Crossing-free drawing of a caterpillar forest.

    Components go left to right.  Along each spine, a spine vertex is placed
    and its leaves follow on the opposite layer, which slots them between
    the spine vertex's two spine neighbours.
    """
    top: list[int] = []
    bottom: list[int] = []
    layer = {Side.TOP: top, Side.BOTTOM: bottom}
    for comp in connected_components(g):
        if _component_edges(g, comp) != len(comp) - 1:
            raise DrawingError("graph has a cycle; no planar two-layer drawing")
        spine = _spine(g, comp)
        if spine is None:
            raise DrawingError("component is not a caterpillar")
        if not spine:
            # single vertex or single edge
            for v in sorted(comp):
                layer[g.side(v)].append(v)
            continue
        for v in spine:
            layer[g.side(v)].append(v)
            leaves = sorted(u for u in g.neighbors(v) if g.degree(u) == 1)
            layer[g.side(v).other].extend(leaves)
    return Drawing(tuple(top), tuple(bottom))


def count_crossings(g: BipartiteGraph, d: Drawing) -> int:
    """Number of edge pairs that cross, by inversion counting in O(m log m)."""
    d.check_against(g)
    tpos = {v: i for i, v in enumerate(d.top_order)}
    bpos = {v: i for i, v in enumerate(d.bottom_order)}
    pairs = sorted((tpos[t], bpos[b]) for t, b in g.edges())
    # Fenwick tree over bottom positions: for each edge, count earlier edges
    # (strictly left top) whose bottom end is strictly to the right.
    n = len(bpos)
    tree = [0] * (n + 1)

    def add(i: int) -> None:
        i += 1
        while i <= n:
            tree[i] += 1
            i += i & -i

    def prefix(i: int) -> int:  # count of inserted positions <= i
        i += 1
        s = 0
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s

    crossings = 0
    inserted = 0
    i = 0
    while i < len(pairs):
        j = i
        while j < len(pairs) and pairs[j][0] == pairs[i][0]:
            j += 1
        for _, b in pairs[i:j]:
            crossings += inserted - prefix(b)
        for _, b in pairs[i:j]:
            add(b)
        inserted += j - i
        i = j
    return crossings
