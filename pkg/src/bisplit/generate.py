"""Seeded instance generators.

All randomness comes from one ``random.Random(seed)``, so equal arguments
give identical graphs (and identical files once serialized).
"""

from __future__ import annotations

import random as _random

from .graph import BipartiteGraph, Side, gc_paused


class GenerateError(ValueError):
    """Parameters that no instance can satisfy."""


def caterpillar(n: int, seed: int = 0, *, max_components: int | None = None) -> BipartiteGraph:
    """Random caterpillar forest on ``n`` vertices.

    The forest is built component by component: a spine alternating between
    the layers, then the remaining vertices of the component hung as leaves
    off random spine vertices.
    """
    if n < 0:
        raise GenerateError("n must be non-negative")
    rng = _random.Random(seed)
    return _caterpillar(n, rng, max_components)


def _caterpillar(n: int, rng: _random.Random, max_components: int | None) -> BipartiteGraph:
    if max_components is None:
        max_components = max(1, n // 12)
    sizes = []
    left = n
    while left:
        if len(sizes) == max_components - 1:
            sizes.append(left)
            break
        size = rng.randint(1, left)
        sizes.append(size)
        left -= size

    g = BipartiteGraph()
    counters = {Side.TOP: 0, Side.BOTTOM: 0}

    def new(side: Side) -> int:
        v = g.add_vertex(side, f"{side.value}{counters[side]}")
        counters[side] += 1
        return v

    for size in sizes:
        spine_len = rng.randint(1, size)
        side = rng.choice((Side.TOP, Side.BOTTOM))
        spine = []
        for _ in range(spine_len):
            v = new(side)
            if spine:
                g.add_edge(spine[-1], v)
            spine.append(v)
            side = side.other
        for _ in range(size - spine_len):
            s = rng.choice(spine)
            g.add_edge(s, new(g.side(s).other))
    return g


def planted(
    n: int, planted_k: int, seed: int = 0, *, group_max: int = 3, attempts: int = 100
) -> BipartiteGraph:
    """Caterpillar forest with ``planted_k`` groups of bottom vertices merged.

    Each group has at least two members with pairwise disjoint neighbourhoods,
    so un-merging the groups is a solution with ``planted_k`` split vertices.
    A merged vertex keeps the name of its first member.
    """
    if planted_k < 0:
        raise GenerateError("planted-k must be non-negative")
    rng = _random.Random(seed)
    for _ in range(attempts):
        base = _caterpillar(n, rng, None)
        groups = _pick_groups(base, planted_k, group_max, rng)
        if groups is not None:
            return _merge_groups(base, groups)
    raise GenerateError(
        f"could not plant {planted_k} disjoint bottom groups in a caterpillar forest on {n} vertices"
    )


def _pick_groups(
    g: BipartiteGraph, count: int, group_max: int, rng: _random.Random
) -> list[list[int]] | None:
    pool = sorted(b for b in g.bottom_vertices if g.degree(b) > 0)
    rng.shuffle(pool)
    used: set[int] = set()
    groups = []
    for _ in range(count):
        want = rng.randint(2, max(2, group_max))
        group: list[int] = []
        seen: set[int] = set()
        for b in pool:
            if b in used or g.neighbors(b) & seen:
                continue
            group.append(b)
            seen |= g.neighbors(b)
            if len(group) == want:
                break
        if len(group) < 2:
            return None
        used.update(group)
        groups.append(group)
    return groups


def _merge_groups(g: BipartiteGraph, groups: list[list[int]]) -> BipartiteGraph:
    # rebuild so that ids stay dense and names stay t0.., b0..
    drop = {b: grp[0] for grp in groups for b in grp}
    h = BipartiteGraph()
    ids: dict[int, int] = {}
    for v in g.vertices():
        if drop.get(v, v) != v:
            continue
        ids[v] = h.add_vertex(g.side(v), g.labels[v])
    for t, b in g.edges():
        h.add_edge(ids[t], ids[drop.get(b, b)])
    return h


def random_bipartite(n: int, m: int, seed: int = 0) -> BipartiteGraph:
    """Uniform graph with ``ceil(n/2)`` tops, ``floor(n/2)`` bottoms and ``m`` edges."""
    n_top, n_bottom = (n + 1) // 2, n // 2
    if n < 0 or m < 0:
        raise GenerateError("n and m must be non-negative")
    if m > n_top * n_bottom:
        raise GenerateError(f"m = {m} exceeds the {n_top * n_bottom} possible edges")
    rng = _random.Random(seed)
    with gc_paused():
        return _random_bipartite(n_top, n_bottom, m, rng)


def _random_bipartite(n_top: int, n_bottom: int, m: int, rng: _random.Random) -> BipartiteGraph:
    if 2 * m > n_top * n_bottom:
        cells = rng.sample(range(n_top * n_bottom), m)
    else:
        chosen: set[int] = set()
        cells = []
        total = n_top * n_bottom
        while len(cells) < m:
            c = rng.randrange(total)
            if c not in chosen:
                chosen.add(c)
                cells.append(c)
    # tops get ids 0.., bottoms follow; the cells are distinct, so no checks needed.
    # Sets share one int object per vertex, as in parsed graphs.
    vids = list(range(n_top + n_bottom))
    adj: dict[int, set[int]] = {v: set() for v in vids}
    for c in sorted(cells):
        t, b = divmod(c, n_bottom)
        t, b = vids[t], vids[n_top + b]
        adj[t].add(b)
        adj[b].add(t)
    side = {v: Side.TOP if v < n_top else Side.BOTTOM for v in adj}
    labels = {v: f"t{v}" if v < n_top else f"b{v - n_top}" for v in adj}
    return BipartiteGraph.from_parts(adj, side, labels, next_id=n_top + n_bottom)
