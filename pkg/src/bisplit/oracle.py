"""Exhaustive reference solver for small instances.

Nothing here touches the kernel or the caterpillar test.  A split graph is
declared drawable only when a search over layer orderings finds one without
crossings.  For a fixed order of one layer the other layer can be sorted by
the (leftmost, rightmost) positions of each vertex's neighbours; two vertices
``x`` before ``y`` avoid crossing exactly when every neighbour of ``x`` sits
at or left of every neighbour of ``y``, so that sort finds a crossing-free
order whenever one exists.

Two facts keep the search affordable without changing its answers:

* components are independent, so each is solved on its own and the
  per-component minima are added up;
* refining a split never hurts (every piece of a finer split is a subgraph
  of the coarser split graph), so a subset of vertices is worth trying only
  if splitting all of them into single edges already works.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence

from .biplanarity import Drawing
from .graph import BipartiteGraph, Side
from .solution import NoCertificate, Solution

DEFAULT_MAX_VERTICES = 12
DEFAULT_MAX_K = 3


class OracleRefused(RuntimeError):
    """The instance is larger than the configured exhaustive-search caps."""


def _set_partitions(items: Sequence) -> Iterator[list[list]]:
    # recursive generation: the first item joins each existing block or a new one
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first], *part]
        for i in range(len(part)):
            yield [*part[:i], [first, *part[i]], *part[i + 1 :]]


def _planar_order(
    left: Sequence, right: Sequence[tuple[object, frozenset]]
) -> tuple[tuple, tuple] | None:
    """Search orders of ``left``; ``right`` holds (name, neighbours in left).

    Returns (left order, right order) of a crossing-free drawing, or None.
    """
    m = sum(len(n) for _, n in right)
    if m > len(left) + len(right) - 1:
        return None  # a crossing-free two-layer drawing is a forest
    n = len(left)
    for idx in itertools.permutations(range(n)):
        if n > 1 and idx[0] > idx[-1]:
            continue  # mirror image of an order already tried
        perm = [left[i] for i in idx]
        pos = {v: i for i, v in enumerate(perm)}
        spans = []
        loose = []
        for name, nbrs in right:
            if nbrs:
                ps = [pos[u] for u in nbrs]
                spans.append((min(ps), max(ps), name))
            else:
                loose.append(name)
        spans.sort(key=lambda s: (s[0], s[1]))
        reach = -1
        ok = True
        for lo, hi, _ in spans:
            if lo < reach:
                ok = False
                break
            reach = max(reach, hi)
        if ok:
            return tuple(perm), tuple(s[2] for s in spans) + tuple(loose)
    return None


def _drawable(tops: list[int], bottoms: list[tuple[object, frozenset]]) -> tuple | None:
    """Crossing-free order of a split graph given as bottom pieces."""
    if len(tops) <= len(bottoms):
        found = _planar_order(tops, bottoms)
        return found
    top_nbrs: dict[int, set] = {t: set() for t in tops}
    for name, nbrs in bottoms:
        for t in nbrs:
            top_nbrs[t].add(name)
    found = _planar_order([name for name, _ in bottoms], [(t, frozenset(top_nbrs[t])) for t in tops])
    if found is None:
        return None
    b_order, t_order = found
    return t_order, b_order


def _pieces(g: BipartiteGraph, comp: set[int], blocks: dict[int, list[list[int]]]):
    bottoms = []
    for b in sorted(v for v in comp if g.side(v) is Side.BOTTOM):
        if b in blocks:
            for i, block in enumerate(blocks[b], start=1):
                bottoms.append(((b, i), frozenset(block)))
        else:
            bottoms.append(((b, 0), frozenset(g.neighbors(b))))
    tops = sorted(v for v in comp if g.side(v) is Side.TOP)
    return tops, bottoms


def _components(g: BipartiteGraph) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for root in sorted(g):
        if root in seen:
            continue
        comp, stack = {root}, [root]
        while stack:
            for u in g.neighbors(stack.pop()):
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        out.append(comp)
    return out


def _solve_component(
    g: BipartiteGraph, comp: set[int], budget: int
) -> dict[int, list[list[int]]] | None:
    bottoms = sorted(v for v in comp if g.side(v) is Side.BOTTOM and g.degree(v) >= 2)
    for size in range(min(budget, len(bottoms)) + 1):
        for subset in itertools.combinations(bottoms, size):
            finest = {b: [[t] for t in sorted(g.neighbors(b))] for b in subset}
            if _drawable(*_pieces(g, comp, finest)) is None:
                continue
            options = [
                [p for p in _set_partitions(sorted(g.neighbors(b))) if len(p) >= 2]
                for b in subset
            ]
            for choice in itertools.product(*options):
                blocks = dict(zip(subset, choice))
                if _drawable(*_pieces(g, comp, blocks)) is not None:
                    return blocks
            raise AssertionError("finest split drawable but no split found")
    return None


def oracle_solve(
    g: BipartiteGraph,
    k: int,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_k: int = DEFAULT_MAX_K,
) -> Solution | NoCertificate:
    """Minimum split solution with at most ``k`` split vertices, by exhaustion.

    The vertex cap applies to each connected component.
    """
    if k < 0:
        return NoCertificate("negative budget", f"k = {k}")
    if k > max_k:
        raise OracleRefused(f"k = {k} exceeds the oracle cap {max_k}")
    comps = _components(g)
    for comp in comps:
        if len(comp) > max_vertices:
            raise OracleRefused(
                f"component with {len(comp)} vertices exceeds the oracle cap {max_vertices}"
            )
    splits: dict[int, tuple[frozenset, ...]] = {}
    left = k
    for comp in comps:
        if left < 0:
            break
        blocks = _solve_component(g, comp, left)
        if blocks is None:
            return NoCertificate("oracle exhausted", f"no split of at most {k} vertices")
        for b, part in blocks.items():
            splits[b] = tuple(frozenset((t, b) for t in block) for block in part)
        left -= len(blocks)
    return Solution(splits)


def oracle_min_splits(g: BipartiteGraph, cap: int, **caps: int) -> int | None:
    """Smallest number of split vertices, or None if more than ``cap`` are needed."""
    sol = oracle_solve(g, cap, max_k=max(cap, DEFAULT_MAX_K), **caps)
    return None if isinstance(sol, NoCertificate) else len(sol)


def find_planar_ordering(h: BipartiteGraph) -> Drawing | None:
    """Crossing-free drawing of ``h`` found by ordering search, component by component."""
    top: list[int] = []
    bottom: list[int] = []
    for comp in _components(h):
        tops, bottoms = _pieces(h, comp, {})
        found = _drawable(tops, bottoms)
        if found is None:
            return None
        t_order, b_order = found
        top.extend(t_order)
        bottom.extend(name[0] for name in b_order)
    return Drawing(tuple(top), tuple(bottom))
