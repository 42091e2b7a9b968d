"""Shared fixtures-as-functions: small named graphs and the seeded suites."""

from __future__ import annotations

import functools
import itertools
import random

from bisplit.graph import BipartiteGraph
from bisplit.oracle import oracle_solve
from bisplit.solution import NoCertificate


def G(*edges: str, tops=(), bottoms=()) -> BipartiteGraph:
    """``G("t1 b1", "t2 b1")``: graph from space-separated top/bottom name pairs."""
    return BipartiteGraph.from_edges([tuple(e.split()) for e in edges], tops, bottoms)


def vid(g: BipartiteGraph, name: str) -> int:
    (v,) = [v for v, label in g.labels.items() if label == name]
    return v


def names(g: BipartiteGraph, vs) -> set[str]:
    return {g.labels[v] for v in vs}


C4 = ("t1 b1", "t1 b2", "t2 b1", "t2 b2")
PATH5 = ("t1 b1", "t2 b1", "t2 b2", "t3 b2")
SPIDER = ("t0 b1", "t0 b2", "t0 b3", "t1 b1", "t2 b2", "t3 b3")
K23 = tuple(f"t{i} b{j}" for i in (1, 2) for j in (1, 2, 3))


def oracle_yes(g: BipartiteGraph, k: int) -> bool:
    """Oracle decision; a negative budget is a NO."""
    if k < 0:
        return False
    return not isinstance(oracle_solve(g, k, max_k=max(k, 3), max_vertices=16), NoCertificate)


# -- suites ------------------------------------------------------------------


def random_small_graph(rng: random.Random, max_n: int = 10, max_m: int = 14) -> BipartiteGraph:
    n = rng.randint(2, max_n)
    a = rng.randint(1, n - 1)
    b = n - a
    m = rng.randint(1, min(max_m, a * b))
    cells = rng.sample([(i, j) for i in range(a) for j in range(b)], m)
    return BipartiteGraph.from_edges([(f"t{i}", f"b{j}") for i, j in sorted(cells)])


@functools.cache
def random_suite(count: int = 5000, seed: int = 20240601) -> tuple[BipartiteGraph, ...]:
    """The seeded random suite: |T|+|B| <= 10, m <= 14."""
    rng = random.Random(seed)
    return tuple(random_small_graph(rng) for _ in range(count))


def _canonical(n_top: int, n_bottom: int, edges: tuple[tuple[int, int], ...]) -> tuple:
    # bottoms as bitmasks over the tops; sorting them absorbs bottom permutations
    best = None
    for perm in itertools.permutations(range(n_top)):
        masks = [0] * n_bottom
        for t, b in edges:
            masks[b] |= 1 << perm[t]
        key = tuple(sorted(masks))
        if best is None or key < best:
            best = key
    return best


def _connected(n_top: int, n_bottom: int, edges) -> bool:
    adj: dict[tuple[str, int], set] = {("t", i): set() for i in range(n_top)}
    adj.update({("b", j): set() for j in range(n_bottom)})
    for t, b in edges:
        adj[("t", t)].add(("b", b))
        adj[("b", b)].add(("t", t))
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(adj)


@functools.cache
def connected_graphs(max_vertices: int = 7) -> tuple[BipartiteGraph, ...]:
    """All connected bipartite graphs with a fixed layer assignment, up to isomorphism.

    Isomorphisms map tops to tops and bottoms to bottoms.  The single vertex
    graphs are included (one per layer).
    """
    out = [G(tops=["t0"]), G(bottoms=["b0"])]
    for n in range(2, max_vertices + 1):
        for n_top in range(1, n):
            n_bottom = n - n_top
            cells = [(t, b) for t in range(n_top) for b in range(n_bottom)]
            seen = set()
            for r in range(n - 1, len(cells) + 1):  # a connected graph needs n - 1 edges
                for edges in itertools.combinations(cells, r):
                    if not _connected(n_top, n_bottom, edges):
                        continue
                    key = (n_top, n_bottom, _canonical(n_top, n_bottom, edges))
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(BipartiteGraph.from_edges([(f"t{t}", f"b{b}") for t, b in edges]))
    return tuple(out)


@functools.cache
def graph_classes(max_vertices: int) -> tuple[BipartiteGraph, ...]:
    """One graph per isomorphism class (layers fixed), isolated vertices and all."""
    out = []
    for n in range(0, max_vertices + 1):
        for n_top in range(0, n + 1):
            n_bottom = n - n_top
            cells = [(t, b) for t in range(n_top) for b in range(n_bottom)]
            tops = [f"t{i}" for i in range(n_top)]
            bottoms = [f"b{j}" for j in range(n_bottom)]
            seen = set()
            for mask in range(1 << len(cells)):
                edges = tuple(c for i, c in enumerate(cells) if mask >> i & 1)
                if n_top <= n_bottom:
                    key = _canonical(n_top, n_bottom, edges)
                else:
                    key = _canonical(n_bottom, n_top, tuple((b, t) for t, b in edges))
                if key in seen:
                    continue
                seen.add(key)
                named = [(f"t{t}", f"b{b}") for t, b in edges]
                out.append(BipartiteGraph.from_edges(named, tops, bottoms))
    return tuple(out)


def exhaustive_planar(g: BipartiteGraph) -> bool:
    """Try every pair of layer orders; True if one has no crossing.

    Deliberately naive: shares nothing with the caterpillar test or the
    oracle's sorting shortcut.
    """
    import numpy as np

    tops = sorted(g.top_vertices)
    bottoms = sorted(g.bottom_vertices)
    edges = g.edges()
    if len(edges) < 2:
        return True
    ti = np.array([tops.index(t) for t, _ in edges])
    bi = np.array([bottoms.index(b) for _, b in edges])
    iu, ju = np.triu_indices(len(edges), 1)
    bottom_perms = np.array(list(itertools.permutations(range(len(bottoms)))))  # rows: position of bottom j
    pb = bottom_perms[:, bi]  # (perms, edges)
    db = pb[:, iu] - pb[:, ju]
    for top_pos in itertools.permutations(range(len(tops))):
        pt = np.array(top_pos)[ti]
        dt = pt[iu] - pt[ju]
        crossings = ((dt * db) < 0).sum(axis=1)
        if (crossings == 0).any():
            return True
    return False
