"""End-to-end solving in the three CLI modes."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .biplanarity import Drawing, count_crossings, layout
from .graph import BipartiteGraph
from .kernel import Kernel, kernelize
from .lift import lift
from .oracle import DEFAULT_MAX_K, DEFAULT_MAX_VERTICES, find_planar_ordering, oracle_solve
from .solution import NoCertificate, Solution, apply_splits
from .solver import solve_kernel


class Mode(str, enum.Enum):
    AUTO = "auto"
    ORACLE = "oracle"
    KERNEL_ONLY = "kernel-only"


@dataclass
class Outcome:
    """Everything a report needs about one solver run.

    ``decision`` is None in kernel-only mode unless kernelization already
    rejected the instance.
    """

    graph: BipartiteGraph
    k: int
    mode: Mode
    decision: bool | None
    solution: Solution | None = None
    split_graph: BipartiteGraph | None = None
    drawing: Drawing | None = None
    kernel: Kernel | None = None
    rejection: NoCertificate | None = None
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def crossings(self) -> int | None:
        if self.split_graph is None or self.drawing is None:
            return None
        return count_crossings(self.split_graph, self.drawing)


def solve(
    g: BipartiteGraph,
    k: int,
    mode: Mode | str = Mode.AUTO,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_k: int = DEFAULT_MAX_K,
    engine: str = "arrays",
) -> Outcome:
    if k < 0:
        raise ValueError("k must be non-negative")
    mode = Mode(mode)
    if mode is Mode.ORACLE:
        return _solve_oracle(g, k, max_vertices, max_k)

    ker = kernelize(g, k, engine=engine)
    if isinstance(ker, NoCertificate):
        return Outcome(g, k, mode, False, rejection=ker, stats=dict(ker.stats))
    stats = dict(ker.state.stats)
    if mode is Mode.KERNEL_ONLY:
        return Outcome(g, k, mode, None, kernel=ker, stats=stats)

    ksol = solve_kernel(ker.graph, ker.state.budget)
    if isinstance(ksol, NoCertificate):
        return Outcome(g, k, mode, False, kernel=ker, rejection=ksol, stats=stats)
    stats["kernel_splits"] = len(ksol)
    kdraw = layout(apply_splits(ker.graph, ksol))
    res = lift(ksol, kdraw, ker.trace, ker.state, g, k)
    return Outcome(
        g,
        k,
        mode,
        True,
        solution=res.solution,
        split_graph=res.split_graph,
        drawing=res.drawing,
        kernel=ker,
        stats=stats,
    )


def _solve_oracle(g: BipartiteGraph, k: int, max_vertices: int, max_k: int) -> Outcome:
    sol = oracle_solve(g, k, max_vertices=max_vertices, max_k=max_k)
    if isinstance(sol, NoCertificate):
        return Outcome(g, k, Mode.ORACLE, False, rejection=sol)
    h = apply_splits(g, sol)
    drawing = find_planar_ordering(h)
    if drawing is None:  # pragma: no cover - the oracle only returns drawable splits
        raise AssertionError("oracle solution has no crossing-free ordering")
    return Outcome(g, k, Mode.ORACLE, True, solution=sol, split_graph=h, drawing=drawing)
