"""Instance files and result documents.

Instance format (line oriented)::

    c any comment
    p bip <|T|> <|B|> <|E|>
    v t <name>          optional, declares a top vertex (needed for isolated ones)
    e <top name> <bottom name>

Result documents are ``key: value`` lines, or the same fields as JSON.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from typing import TextIO

from .graph import BipartiteGraph, Side, gc_paused
from .pipeline import Outcome


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_instance(lines: Iterable[str]) -> BipartiteGraph:
    with gc_paused():
        return _parse(lines)


def _parse(lines: Iterable[str]) -> BipartiteGraph:
    header: tuple[int, int, int, int] | None = None
    tops: dict[str, int] = {}
    bottoms: dict[str, int] = {}
    g = BipartiteGraph()
    seen_edges: set[tuple[int, int]] = set()

    def vertex(names: dict[str, int], side: Side, name: str) -> int:
        v = names.get(name)
        if v is None:
            v = names[name] = g.add_vertex(side, name)
        return v

    for lineno, raw in enumerate(lines, start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        kind = parts[0]
        if kind == "p":
            if header is not None:
                raise ParseError(lineno, "second header line")
            if len(parts) != 5 or parts[1] != "bip":
                raise ParseError(lineno, "expected 'p bip <|T|> <|B|> <|E|>'")
            try:
                counts = [int(x) for x in parts[2:]]
            except ValueError:
                raise ParseError(lineno, "header counts must be integers") from None
            if min(counts) < 0:
                raise ParseError(lineno, "header counts must be non-negative")
            header = (lineno, *counts)
            continue
        if header is None:
            raise ParseError(lineno, f"'{kind}' line before the 'p bip' header")
        if kind == "e":
            if len(parts) != 3:
                raise ParseError(lineno, "expected 'e <top> <bottom>'")
            t = vertex(tops, Side.TOP, parts[1])
            b = vertex(bottoms, Side.BOTTOM, parts[2])
            if (t, b) in seen_edges:
                raise ParseError(lineno, f"duplicate edge {parts[1]} {parts[2]}")
            seen_edges.add((t, b))
            g.add_edge(t, b)
        elif kind == "v":
            if len(parts) != 3 or parts[1] not in ("t", "b"):
                raise ParseError(lineno, "expected 'v t|b <name>'")
            if parts[1] == "t":
                vertex(tops, Side.TOP, parts[2])
            else:
                vertex(bottoms, Side.BOTTOM, parts[2])
        else:
            raise ParseError(lineno, f"unknown line type '{kind}'")

    if header is None:
        raise ParseError(0, "missing 'p bip' header")
    hline, n_top, n_bottom, n_edges = header
    found = (len(tops), len(bottoms), len(seen_edges))
    if found != (n_top, n_bottom, n_edges):
        raise ParseError(
            hline,
            f"header declares |T|={n_top} |B|={n_bottom} |E|={n_edges}, "
            f"body has |T|={found[0]} |B|={found[1]} |E|={found[2]}",
        )
    return g


def read_instance(path: str) -> BipartiteGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh)


def serialize_instance(g: BipartiteGraph, comment: str | None = None) -> str:
    """Instance text; isolated vertices get ``v`` lines, edges follow in id order."""
    out = []
    if comment:
        out.extend(f"c {line}".rstrip() for line in comment.splitlines())
    tops = g.top_vertices
    out.append(f"p bip {len(tops)} {len(g) - len(tops)} {g.num_edges()}")
    for v in g.vertices():
        if g.degree(v) == 0:
            out.append(f"v {g.side(v).value} {g.labels[v]}")
    labels = g.labels
    out.extend(f"e {labels[t]} {labels[b]}" for t, b in g.edges())
    return "\n".join(out) + "\n"


def canonical_form(g: BipartiteGraph) -> tuple[tuple[str, ...], tuple[str, ...], tuple]:
    """Name-level view of a graph: sorted top names, bottom names and edges."""
    labels = g.labels
    return (
        tuple(sorted(labels[v] for v in g.top_vertices)),
        tuple(sorted(labels[v] for v in g.bottom_vertices)),
        tuple(sorted((labels[t], labels[b]) for t, b in g.edges())),
    )


# -- result documents ---------------------------------------------------------


def result_fields(out: Outcome, *, stats: bool = False) -> dict:
    """Report fields in output order."""
    g = out.graph
    labels = g.labels
    decision = {True: "YES", False: "NO", None: "UNDECIDED"}[out.decision]
    doc: dict = {"decision": decision, "k": out.k, "mode": out.mode.value}
    if out.rejection is not None:
        doc["reason"] = str(out.rejection)
    budgets = out.kernel.state.budgets if out.kernel is not None else {}
    for key in ("k1", "k2"):
        if key in budgets:
            doc[key] = budgets[key]
        elif key in out.stats:
            doc[key] = out.stats[key]
    if out.kernel is not None:
        st = out.kernel.state
        doc["forced_splits"] = sorted(labels[v] for v in st.forced_splits - st.cycle_splits)
        doc["cycle_splits"] = sorted(labels[v] for v in st.cycle_splits)
    if stats and out.stats:
        s = out.stats
        for key in ("forced", "core_size", "cycles", "attached_paths", "shortened_paths",
                    "kernel_vertices", "kernel_edges", "kernel_bound"):
            if key in s:
                doc[key] = s[key]
    if out.kernel is not None and out.decision is None:
        kg = out.kernel.graph
        doc["kernel_graph"] = [[kg.labels[t], kg.labels[b]] for t, b in kg.edges()]
    if out.solution is not None:
        splits = {}
        for v, blocks in sorted(out.solution.splits.items()):
            splits[labels[v]] = [sorted(labels[t] for t, _ in block) for block in blocks]
        doc["split_vertices"] = len(splits)
        doc["solution"] = splits
    if out.drawing is not None and out.split_graph is not None:
        hl = out.split_graph.labels
        doc["top_order"] = [hl[v] for v in out.drawing.top_order]
        doc["bottom_order"] = [hl[v] for v in out.drawing.bottom_order]
        doc["crossings"] = out.crossings
    return doc


def format_text(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if key == "solution":
            for name, blocks in value.items():
                parts = " | ".join("{" + " ".join(b) + "}" for b in blocks)
                lines.append(f"split {name}: {parts}")
        elif key == "kernel_graph":
            lines.append(f"kernel_graph: {len(value)} edges")
            lines.extend(f"kernel_edge: {t} {b}" for t, b in value)
        elif isinstance(value, list):
            lines.append(f"{key}: {' '.join(map(str, value))}".rstrip())
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def format_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_result(doc: dict, fh: TextIO, fmt: str = "text") -> None:
    fh.write(format_json(doc) if fmt == "json" else format_text(doc))


def parse_result_text(text: str) -> dict[str, str]:
    """Scalar ``key: value`` fields of a text result document."""
    fields: dict[str, str] = {}
    for line in text.splitlines():
        key, sep, value = line.partition(": ")
        if sep and not key.startswith(("split ", "kernel_edge")):
            fields[key] = value
    return fields
