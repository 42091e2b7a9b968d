"""Array-backed kernelization.

Runs the same reductions as the step functions in :mod:`bisplit.kernel`
and returns an identical kernel, trace and statistics.  The linear passes
(forced splits, leaf removal, degree checks, core, classification of the
non-core paths and cycles) are numpy operations over a CSR snapshot of the
input; only the surviving kernel is rebuilt as a :class:`BipartiteGraph`.

Trace records for removed leaves, cycles and path components are produced
on first access to the trace.  They read the input graph at that point, so
the input must not be mutated while the kernel is in use.
"""

from __future__ import annotations

import itertools
import operator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .graph import BipartiteGraph, Side
from .kernel import (
    Kernel,
    KernelState,
    ReductionTrace,
    RemovedCycle,
    RemovedForced,
    RemovedLeaf,
    RemovedPathComponent,
    _finish,
    _reject_degree,
    _reject_forced,
    _reject_high_count,
    _shorten,
    _walk,
    core_bound,
)
from .solution import NoCertificate


class _Csr:
    """Index-space snapshot: vertex ``i`` has id ``ids[i]``.

    Each edge appears as two entries ``(row, nbr)``, one per direction.  The
    first ``m`` entries run bottom to top with ``row`` ascending; the rest are
    their mirror images.
    """

    def __init__(self, g: BipartiteGraph) -> None:
        adj = g.adjacency
        n = len(adj)
        self.n = n
        self.ids = np.fromiter(adj.keys(), np.int64, n)
        self.deg = np.fromiter(map(len, adj.values()), np.int64, n)
        self.is_top = np.fromiter(
            map(operator.is_, map(g.sides.__getitem__, adj), itertools.repeat(Side.TOP)), bool, n
        )
        # 32-bit positions halve the memory traffic of the gathers below
        idx = np.int32 if n < 2**31 else np.int64
        self.pos = np.full(int(self.ids.max()) + 1 if n else 0, -1, idx)
        self.pos[self.ids] = np.arange(n, dtype=idx)
        # flatten the bottom side only; the other direction is a numpy copy
        bottoms = np.flatnonzero(~self.is_top).astype(idx)
        flat = np.fromiter(
            itertools.chain.from_iterable(map(adj.__getitem__, self.ids[bottoms].tolist())),
            np.int64,
            int(self.deg[bottoms].sum()),
        )
        b_idx = np.repeat(bottoms, self.deg[bottoms])
        self.m = len(b_idx)
        t_idx = self.pos[flat]
        self.row = np.concatenate((b_idx, t_idx))
        self.nbr = np.concatenate((t_idx, b_idx))

    def count(self, entry_mask: np.ndarray) -> np.ndarray:
        """Per-vertex number of incident entries selected by ``entry_mask``."""
        return np.bincount(self.row[entry_mask], minlength=self.n)


class _Membership:
    """``in`` test backed by a byte per vertex id."""

    __slots__ = ("flags",)

    def __init__(self, flags: bytes) -> None:
        self.flags = flags

    def __contains__(self, v: object) -> bool:
        return bool(self.flags[v])  # type: ignore[index]


def _id_flags(csr: _Csr, mask: np.ndarray) -> bytes:
    flags = np.zeros(len(csr.pos), np.uint8)
    flags[csr.ids[mask]] = 1
    return flags.tobytes()


def _leaf_mask(csr: _Csr, forced: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Leaves removed by the second step of rule 1, and each vertex's hub."""
    nbr, row = csr.nbr, csr.row
    to_forced = forced[nbr]
    deg1 = csr.deg - csr.count(to_forced)
    cand = ~forced & (deg1 == 1)
    ent = cand[row] & ~to_forced
    hub = np.full(csr.n, -1, np.int64)
    hub[row[ent]] = nbr[ent]
    leaf = cand.copy()
    leaf[cand] = deg1[hub[cand]] >= 3
    # a hub left with one neighbour keeps its smallest leaf
    idx = np.flatnonzero(leaf)
    hubs = hub[idx]
    cnt = np.bincount(hubs, minlength=csr.n)
    guarded = (cnt > 0) & (deg1 - cnt == 1)
    sel = idx[guarded[hubs]]
    if len(sel):
        order = np.lexsort((csr.ids[sel], hub[sel]))
        sel, sh = sel[order], hub[sel][order]
        first = np.ones(len(sel), bool)
        first[1:] = sh[1:] != sh[:-1]
        leaf[sel[first]] = False
    return leaf, hub


def _groups(labels: np.ndarray, members: np.ndarray, ids: np.ndarray) -> dict[int, np.ndarray]:
    """Member ids per label, for the given (labels, member indices)."""
    order = np.argsort(labels, kind="stable")
    lab, mem = labels[order], members[order]
    cuts = np.flatnonzero(np.diff(lab)) + 1
    out = {}
    for chunk_lab, chunk in zip(np.split(lab, cuts), np.split(mem, cuts)):
        if len(chunk):
            out[int(chunk_lab[0])] = ids[chunk]
    return out


def kernelize_arrays(g: BipartiteGraph, k: int) -> Kernel | NoCertificate:
    csr = _Csr(g)
    n, ids, nbr, row, is_top = csr.n, csr.ids, csr.nbr, csr.row, csr.is_top

    heavy = csr.count(csr.deg[nbr] >= 2)
    forced = ~is_top & (heavy >= 3)
    n_forced = int(forced.sum())
    k1 = k - n_forced
    stats: dict[str, int] = {"k": k, "forced": n_forced, "k1": k1}
    if n_forced > k:
        return _reject_forced(n_forced, k, stats)

    leaf, hub = _leaf_mask(csr, forced)
    removed = forced | leaf
    alive = ~removed
    deg2 = csr.deg - csr.count(removed[nbr])
    over = alive & ~is_top & (deg2 > 2)
    if over.any():
        v = int(ids[np.flatnonzero(over)[0]])
        raise AssertionError(f"bottom vertex {g.labels[v]} still has degree {int(deg2[over][0])}")
    alive_tops = alive & is_top
    if alive_tops.any() and int(deg2[alive_tops].max()) > k1 + 2:
        return _reject_degree(k1, stats)
    high = alive_tops & (deg2 >= 3)
    if int(high.sum()) > 2 * k1:
        return _reject_high_count(k1, stats)

    core = high.copy()
    ent = high[row] & alive[nbr]
    core[nbr[ent]] = True
    if int(core.sum()) > core_bound(k1):
        raise AssertionError(f"core has {int(core.sum())} vertices, bound {core_bound(k1)}")

    # non-core components: paths and cycles
    nc = alive & ~core
    inner_ent = nc[row] & nc[nbr]
    inner = csr.count(inner_ent)
    attached_v = csr.count(nc[row] & core[nbr]) > 0
    # components over the non-core vertices only; the bottom-to-top half of
    # the entries is already sorted by row, so it forms a CSR matrix as is
    nc_idx = np.flatnonzero(nc)
    n_nc = len(nc_idx)
    local = np.full(n, -1, row.dtype)
    local[nc_idx] = np.arange(n_nc, dtype=row.dtype)
    half = inner_ent[: csr.m]
    r, c = local[row[: csr.m][half]], local[nbr[: csr.m][half]]
    indptr = np.zeros(n_nc + 1, row.dtype)
    np.cumsum(np.bincount(r, minlength=n_nc), out=indptr[1:])
    mat = csr_matrix((np.ones(len(r), np.int8), c, indptr), shape=(n_nc, n_nc))
    _, lab = connected_components(mat, directed=True, connection="weak")
    n_comp = int(lab.max()) + 1 if n_nc else 0
    size = np.bincount(lab, minlength=n_comp)
    edges2 = np.bincount(lab, weights=inner[nc_idx], minlength=n_comp)
    present = size > 0
    is_cycle = present & (edges2 == 2 * size)
    attached_c = np.bincount(lab, weights=attached_v[nc_idx], minlength=n_comp) > 0
    free_c = present & ~is_cycle & ~attached_c
    path_c = present & ~is_cycle & attached_c
    if (is_cycle & attached_c).any():
        raise AssertionError("a non-core cycle touches the core")
    min_id = np.full(n_comp, np.iinfo(np.int64).max)
    np.minimum.at(min_id, lab, ids[nc_idx])

    n_cycles = int(is_cycle.sum())
    k2 = k1 - n_cycles
    z_ids: list[int] = []
    if n_cycles:
        bot = nc_idx[~is_top[nc_idx] & is_cycle[lab]]
        zmin = np.full(n_comp, np.iinfo(np.int64).max)
        np.minimum.at(zmin, lab[local[bot]], ids[bot])
        cyc_order = np.flatnonzero(is_cycle)[np.argsort(min_id[is_cycle], kind="stable")]
        z_ids = zmin[cyc_order].tolist()
    free_order = np.flatnonzero(free_c)[np.argsort(min_id[free_c], kind="stable")]

    # trace records are built on first access
    trace = ReductionTrace()
    adj, labels, sides = g.adjacency, g.labels, g.sides
    forced_ids = np.sort(ids[forced])
    trace.defer(
        lambda: [
            RemovedForced(v, labels[v], tuple(sorted(adj[v]))) for v in forced_ids.tolist()
        ]
    )
    leaf_idx = np.flatnonzero(leaf)
    leaf_order = np.argsort(ids[leaf_idx], kind="stable")
    leaf_ids = ids[leaf_idx][leaf_order]
    leaf_hubs = ids[hub[leaf_idx][leaf_order]]
    trace.defer(
        lambda: [
            RemovedLeaf(v, sides[v], labels[v], u)
            for v, u in zip(leaf_ids.tolist(), leaf_hubs.tolist())
        ]
    )
    if n_cycles or len(free_order):
        trace.defer(
            _component_records(
                g, _Membership(_id_flags(csr, nc)), lab, nc_idx, ids, inner,
                cyc_order if n_cycles else np.empty(0, np.int64), z_ids, free_order,
            )
        )

    # kernel graph: alive vertices outside removed components
    gone_c = is_cycle | free_c
    keep = alive.copy()
    keep[nc_idx[gone_c[lab]]] = False
    keep_flags = _id_flags(csr, keep)
    needs_filter = csr.count(~keep[nbr])
    kadj: dict[int, set[int]] = {}
    for v, f in zip(ids[keep].tolist(), needs_filter[keep].tolist()):
        n_v = adj[v]
        kadj[v] = {u for u in n_v if keep_flags[u]} if f else set(n_v)
    h = BipartiteGraph.from_parts(
        kadj,
        {v: sides[v] for v in kadj},
        {v: labels[v] for v in kadj},
        {v: g.origin[v] for v in kadj if v in g.origin},
        g.fresh_id(),
    )

    core_ids = set(ids[core].tolist())
    paths = []
    shortened = 0
    if k2 >= 0:
        threshold = 2 * k2 + 5
        long_c = path_c & (size > threshold)
        if long_c.any():
            sel = long_c[lab]
            members = _groups(lab[sel], nc_idx[sel], ids)
            nc_member = _Membership(_id_flags(csr, nc))
            for c in sorted(members, key=lambda c: int(min_id[c])):
                mem = members[c].tolist()
                ends = [v for v in mem if inner[csr.pos[v]] <= 1]
                att = [v for v in ends if attached_v[csr.pos[v]]]
                start = min(att) if att else min(ends)
                seq = _walk(h.adjacency, start, nc_member)
                rec = _shorten(h, seq, threshold, len(paths), trace)
                paths.append(rec)
                shortened += 1
                assert 2 * k2 + 3 <= len(rec.kernel_sequence) <= threshold

    state = KernelState(
        graph=h,
        budget=k2,
        core=core_ids,
        forced_splits=set(forced_ids.tolist()) | set(z_ids),
        cycle_splits=set(z_ids),
        budgets={"k": k, "k1": k1, "k2": k2},
        paths=paths,
        stats={
            "core_size": len(core_ids),
            "cycles": n_cycles,
            "attached_paths": int(path_c.sum()),
            "shortened_paths": shortened,
            "kernel_vertices": len(h),
            "kernel_edges": h.num_edges(),
        },
    )
    return _finish(state, trace, stats)


def _component_records(g, noncore, lab, nc_idx, ids, inner, cyc_order, z_ids, free_order):
    """Producer of RemovedCycle and RemovedPathComponent records, in trace order."""

    def produce():
        adj, labels, sides = g.adjacency, g.labels, g.sides
        wanted = np.zeros(int(lab.max()) + 1 if len(lab) else 0, bool)
        wanted[cyc_order] = True
        wanted[free_order] = True
        sel = wanted[lab]
        members = _groups(lab[sel], nc_idx[sel], ids)
        inner_by_id = dict(zip(ids[nc_idx[sel]].tolist(), inner[nc_idx[sel]].tolist()))
        out = []
        for c, z in zip(cyc_order.tolist(), z_ids):
            seq = _walk(adj, z, noncore, len(members[c]))
            out.append(
                RemovedCycle(
                    tuple(seq), tuple(sides[v] for v in seq), tuple(labels[v] for v in seq), z
                )
            )
        for c in free_order.tolist():
            start = min(v for v in members[c].tolist() if inner_by_id[v] <= 1)
            seq = _walk(adj, start, noncore)
            out.append(
                RemovedPathComponent(
                    tuple(seq), tuple(sides[v] for v in seq), tuple(labels[v] for v in seq)
                )
            )
        return out

    return produce
