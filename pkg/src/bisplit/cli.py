"""Command line front end: ``bisplit solve | gen | bench``.

Exit status: 0 for YES (or an undecided kernel-only run), 1 for NO,
2 for usage, parse and generation errors and oracle refusals.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from collections.abc import Sequence

from .generate import GenerateError, caterpillar, planted, random_bipartite
from .io import ParseError, parse_instance, read_instance, result_fields, serialize_instance, write_result
from .kernel import ENGINES, kernelize
from .oracle import DEFAULT_MAX_K, DEFAULT_MAX_VERTICES, OracleRefused
from .pipeline import Mode, solve
from .solution import NoCertificate

log = logging.getLogger("bisplit")

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bisplit", description="Split bottom vertices to remove all crossings.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)  # bad usage exits with 2

    s = sub.add_parser("solve", help="decide an instance and report a witness")
    s.add_argument("--input", required=True, help="instance file ('-' for stdin)")
    s.add_argument("--k", type=int, required=True, help="maximum number of split vertices")
    s.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.AUTO.value)
    s.add_argument("--out", help="write the result document here instead of stdout")
    s.add_argument("--svg", help="render the crossing-free drawing to this SVG file")
    s.add_argument("--stats", action="store_true", help="include kernel statistics")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--engine", choices=ENGINES, default=ENGINES[0], help="kernelization engine")
    s.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES,
                   help="oracle cap on component size")
    s.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="oracle cap on k")

    g = sub.add_parser("gen", help="write a seeded random instance")
    g.add_argument("--type", required=True, choices=("caterpillar", "planted", "random"))
    g.add_argument("--n", type=int, required=True, help="number of vertices")
    g.add_argument("--m", type=int, help="number of edges (random)")
    g.add_argument("--planted-k", type=int, default=1, help="number of merged groups (planted)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output file (default stdout)")

    b = sub.add_parser("bench", help="time kernelization on random instances")
    b.add_argument("--m", type=int, nargs="+", default=[10**4, 10**5, 10**6],
                   help="edge counts; n = m vertices each")
    b.add_argument("--k", type=int, help="budget (default m, so no early rejection)")
    b.add_argument("--repeat", type=int, default=3, help="best of this many runs")
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--csv", default="bench.csv", help="CSV output ('-' for stdout)")
    b.add_argument("--figure", default="bench.svg", help="time-vs-m plot (any matplotlib format)")
    return p


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8", newline="") if path and path != "-" else None


def cmd_solve(args: argparse.Namespace) -> int:
    if args.k < 0:
        raise _UsageError("--k must be non-negative")
    g = parse_instance(sys.stdin) if args.input == "-" else read_instance(args.input)
    log.info("read %d vertices, %d edges", len(g), g.num_edges())
    t0 = time.perf_counter()
    out = solve(g, args.k, args.mode, max_vertices=args.max_vertices, max_k=args.max_k,
                engine=args.engine)
    log.info("solved in %.3f s", time.perf_counter() - t0)

    doc = result_fields(out, stats=args.stats)
    fh = _open_out(args.out)
    try:
        write_result(doc, fh or sys.stdout, args.format)
    finally:
        if fh:
            fh.close()
    if args.svg:
        if out.drawing is None:
            log.warning("no drawing to render (decision %s)", doc["decision"])
        else:
            from .render import render_svg

            render_svg(out.split_graph, out.drawing, args.svg,
                       title=f"k = {args.k}, split vertices: {len(out.solution)}")
    return EXIT_NO if out.decision is False else EXIT_YES


def cmd_gen(args: argparse.Namespace) -> int:
    if args.type == "caterpillar":
        g = caterpillar(args.n, args.seed)
        desc = f"caterpillar n={args.n} seed={args.seed}"
    elif args.type == "planted":
        g = planted(args.n, args.planted_k, args.seed)
        desc = f"planted n={args.n} planted-k={args.planted_k} seed={args.seed}"
    else:
        if args.m is None:
            raise _UsageError("--type random needs --m")
        g = random_bipartite(args.n, args.m, args.seed)
        desc = f"random n={args.n} m={args.m} seed={args.seed}"
    text = serialize_instance(g, comment=desc)
    fh = _open_out(args.out)
    if fh:
        with fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


def _best_time(fn, repeat: int) -> tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def cmd_bench(args: argparse.Namespace) -> int:
    kernelize(random_bipartite(100, 100, 0), 3)  # warm imports
    rows = []
    for m in args.m:
        g = random_bipartite(m, m, args.seed)
        k = m if args.k is None else args.k
        seconds, ker = _best_time(lambda: kernelize(g, k), args.repeat)
        rejected = isinstance(ker, NoCertificate)
        rows.append({
            "m": m,
            "n": m,
            "k": k,
            "seconds": f"{seconds:.6f}",
            "kernel_vertices": 0 if rejected else len(ker.graph),
            "decision": "NO" if rejected else "KERNEL",
        })
        log.info("m=%d: %.3f s", m, seconds)

    fh = _open_out(args.csv)
    target = fh or sys.stdout
    writer = csv.DictWriter(target, fieldnames=list(rows[0]) if rows else ["m"])
    writer.writeheader()
    writer.writerows(rows)
    if fh:
        fh.close()
    if args.figure and rows:
        _plot_bench(rows, args.figure)
    return EXIT_YES


def _plot_bench(rows: list[dict], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ms = [r["m"] for r in rows]
    secs = [float(r["seconds"]) for r in rows]
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.loglog(ms, secs, "o-", label="kernelize")
    # linear reference through the largest instance
    ax.loglog(ms, [secs[-1] * m / ms[-1] for m in ms], "--", color="grey", label="linear")
    ax.set_xlabel("edges m")
    ax.set_ylabel("seconds (best of runs)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


COMMANDS = {"solve": cmd_solve, "gen": cmd_gen, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ParseError, GenerateError, OracleRefused, _UsageError, OSError) as exc:
        print(f"bisplit {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
