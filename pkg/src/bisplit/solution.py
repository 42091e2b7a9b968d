"""Split solutions and the split operation itself."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import BipartiteGraph, Edge, GraphError, Side

Partition = tuple[frozenset[Edge], ...]


@dataclass(frozen=True)
class NoCertificate:
    """Negative answer, naming the check that produced it."""

    reason: str
    detail: str = ""
    stats: dict[str, int] = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"{self.reason}: {self.detail}" if self.detail else self.reason


@dataclass
class Solution:
    """Split bottom vertices, each with its incident edges partitioned into copies.

    Blocks keep their order; block ``i`` becomes copy ``i + 1``.
    """

    splits: dict[int, Partition] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.splits)

    @property
    def split_vertices(self) -> set[int]:
        return set(self.splits)

    def validate(self, g: BipartiteGraph) -> None:
        for v, blocks in self.splits.items():
            if g.side(v) is not Side.BOTTOM:
                raise GraphError(f"vertex {g.labels[v]} is not in the bottom layer")
            if len(blocks) < 2:
                raise GraphError(f"split of {g.labels[v]} has fewer than two copies")
            seen: set[Edge] = set()
            for block in blocks:
                if not block:
                    raise GraphError(f"empty block in split of {g.labels[v]}")
                if seen & block:
                    raise GraphError(f"overlapping blocks in split of {g.labels[v]}")
                seen |= block
            if seen != set(g.incident_edges(v)):
                raise GraphError(f"split of {g.labels[v]} does not cover its edges")

    def canonical(self) -> dict[int, tuple[tuple[Edge, ...], ...]]:
        return {
            v: tuple(sorted(tuple(sorted(b)) for b in blocks))
            for v, blocks in sorted(self.splits.items())
        }


def apply_splits(g: BipartiteGraph, sol: Solution) -> BipartiteGraph:
    """Replace each split vertex by one fresh copy per block.

    Copy ids are allocated in order of (vertex id, block index); copies are
    labelled ``name#i`` and recorded in ``origin``.
    """
    sol.validate(g)
    h = g.copy()
    for v in sorted(sol.splits):
        label = g.labels[v]
        h.remove_vertex(v)
        for i, block in enumerate(sol.splits[v], start=1):
            c = h.add_vertex(Side.BOTTOM, f"{label}#{i}")
            h.origin[c] = (v, i)
            for t, _ in sorted(block):
                h.add_edge(t, c)
    return h


def contract_copies(h: BipartiteGraph) -> set[tuple[int, int]]:
    """Edge set obtained by mapping every copy back onto its original vertex."""
    return {(t, h.origin.get(b, (b, 0))[0]) for t, b in h.edges()}
