"""Brute-force search on a reduced instance.

Every subset of at most ``budget`` bottom vertices is tried, smallest subsets
first, and for each member every way to distribute its edges over two or
more copies.  The first candidate whose split graph is a caterpillar forest
wins, so the answer is deterministic and uses as few split vertices as any
feasible answer can.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from typing import TypeVar

from .biplanarity import is_biplanar
from .graph import BipartiteGraph
from .solution import NoCertificate, Partition, Solution, apply_splits

T = TypeVar("T")


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """All restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield []
        return
    a = [0] * n
    while True:
        yield list(a)
        # rightmost position that can still grow
        i = n - 1
        while i > 0 and a[i] > max(a[:i]):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0


def enumerate_partitions(items: Sequence[T]) -> Iterator[tuple[tuple[T, ...], ...]]:
    """Every set partition of ``items`` exactly once, in restricted-growth order.

    Blocks are listed by their first element; the count is the Bell number.
    """
    items = list(items)
    if not items:
        raise ValueError("cannot partition an empty edge set")
    for rgs in restricted_growth_strings(len(items)):
        blocks: list[list[T]] = [[] for _ in range(max(rgs) + 1)]
        for x, b in zip(items, rgs):
            blocks[b].append(x)
        yield tuple(tuple(b) for b in blocks)


def _split_options(g: BipartiteGraph, v: int) -> list[Partition]:
    return [
        tuple(frozenset(b) for b in p)
        for p in enumerate_partitions(g.incident_edges(v))
        if len(p) >= 2
    ]


def solve_kernel(g: BipartiteGraph, budget: int) -> Solution | NoCertificate:
    if budget < 0:
        return NoCertificate("negative budget", f"budget {budget}")
    candidates = sorted(v for v in g.bottom_vertices if g.degree(v) >= 2)
    options: dict[int, list[Partition]] = {}
    for size in range(min(budget, len(candidates)) + 1):
        for subset in itertools.combinations(candidates, size):
            for v in subset:
                if v not in options:
                    options[v] = _split_options(g, v)
            for choice in itertools.product(*(options[v] for v in subset)):
                sol = Solution(dict(zip(subset, choice)))
                if is_biplanar(apply_splits(g, sol)):
                    return sol
    return NoCertificate(
        "kernel search exhausted",
        f"no split of at most {budget} vertices among {len(candidates)} candidates",
    )
