"""SVG rendering of two-layer drawings with matplotlib.

Top vertices sit on y = 1 and bottom vertices on y = 0, at x = position in
their layer.  Every edge is one straight line with SVG id ``edge-<i>`` and
every vertex one marker with id ``vertex-<id>``, so the emitted coordinates
can be checked directly.  Copies of a split vertex share a colour.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .biplanarity import Drawing  # noqa: E402
from .graph import BipartiteGraph  # noqa: E402

PLAIN = "#444444"
LABEL_LIMIT = 80  # above this many vertices, names are left out


def _palette(n: int) -> list:
    cmap = plt.get_cmap("tab10" if n <= 10 else "tab20")
    return [cmap(i % cmap.N) for i in range(n)]


def render_svg(g: BipartiteGraph, drawing: Drawing, path: str, *, title: str | None = None) -> None:
    drawing.check_against(g)
    xt = {v: i for i, v in enumerate(drawing.top_order)}
    xb = {v: i for i, v in enumerate(drawing.bottom_order)}
    width = max(len(xt), len(xb), 1)

    origins = sorted({g.origin[v][0] for v in xb if v in g.origin})
    colour_of = dict(zip(origins, _palette(len(origins))))

    fig, ax = plt.subplots(figsize=(min(2 + 0.45 * width, 40), 2.4))
    for i, (t, b) in enumerate(g.edges()):
        ax.plot([xt[t], xb[b]], [1, 0], color="#888888", lw=1.0, zorder=1, gid=f"edge-{i}")
    show_labels = len(g) <= LABEL_LIMIT
    for layer, y, va in ((xt, 1, "bottom"), (xb, 0, "top")):
        for v, x in layer.items():
            origin = g.origin.get(v)
            colour = colour_of[origin[0]] if origin else PLAIN
            ax.plot([x], [y], "o", ms=7, color=colour, zorder=2, gid=f"vertex-{v}")
            if show_labels:
                dy = 0.08 if y == 1 else -0.08
                ax.text(x, y + dy, g.labels[v], ha="center", va=va, fontsize=7)
    ax.set_xlim(-0.7, width - 0.3)
    ax.set_ylim(-0.35, 1.35)
    ax.set_yticks([0, 1], ["B", "T"])
    ax.set_xticks([])
    for side in ("top", "right", "bottom"):
        ax.spines[side].set_visible(False)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def svg_segments(path: str) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Edge segments (in SVG coordinates) of a file written by :func:`render_svg`."""
    import xml.etree.ElementTree as ET

    ns = {"svg": "http://www.w3.org/2000/svg"}
    root = ET.parse(path).getroot()
    segs = []
    for grp in root.iter("{http://www.w3.org/2000/svg}g"):
        if not grp.get("id", "").startswith("edge-"):
            continue
        d = grp.find("svg:path", ns).get("d").split()
        # "M x0 y0 L x1 y1"
        segs.append(((float(d[1]), float(d[2])), (float(d[4]), float(d[5]))))
    return segs


def svg_vertex_count(path: str) -> int:
    import xml.etree.ElementTree as ET

    root = ET.parse(path).getroot()
    return sum(
        1 for grp in root.iter("{http://www.w3.org/2000/svg}g") if grp.get("id", "").startswith("vertex-")
    )


def count_segment_crossings(segs) -> int:
    """Pairs of segments that cross at a point other than a shared endpoint."""

    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return (v > 1e-9) - (v < -1e-9)

    def close(p, q):
        return abs(p[0] - q[0]) < 1e-6 and abs(p[1] - q[1]) < 1e-6

    count = 0
    for i in range(len(segs)):
        a, b = segs[i]
        for j in range(i + 1, len(segs)):
            c, d = segs[j]
            if any(close(p, q) for p in (a, b) for q in (c, d)):
                continue
            o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
            if o1 * o2 < 0 and o3 * o4 < 0:
                count += 1
    return count
