"""Crossing removal in two-layer drawings by splitting bottom-layer vertices."""

from .biplanarity import Drawing, count_crossings, is_biplanar, layout
from .generate import GenerateError, caterpillar, planted, random_bipartite
from .graph import BipartiteGraph, Side, connected_components, induced_subgraph
from .io import ParseError, parse_instance, read_instance, serialize_instance
from .kernel import Kernel, kernelize
from .lift import lift
from .oracle import OracleRefused, find_planar_ordering, oracle_solve
from .pipeline import Mode, Outcome, solve
from .solution import NoCertificate, Solution, apply_splits
from .solver import enumerate_partitions, solve_kernel

__all__ = [
    "BipartiteGraph",
    "Drawing",
    "GenerateError",
    "Kernel",
    "Mode",
    "NoCertificate",
    "OracleRefused",
    "Outcome",
    "ParseError",
    "Side",
    "Solution",
    "apply_splits",
    "caterpillar",
    "connected_components",
    "count_crossings",
    "enumerate_partitions",
    "find_planar_ordering",
    "induced_subgraph",
    "is_biplanar",
    "kernelize",
    "layout",
    "lift",
    "oracle_solve",
    "parse_instance",
    "planted",
    "random_bipartite",
    "read_instance",
    "serialize_instance",
    "solve",
    "solve_kernel",
]
