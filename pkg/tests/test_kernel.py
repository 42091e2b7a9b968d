from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisplit.biplanarity import is_biplanar
from bisplit.generate import caterpillar, planted, random_bipartite
from bisplit.graph import Side
from bisplit.kernel import (
    KernelState,
    RemovedCycle,
    RemovedForced,
    RemovedLeaf,
    ShortenedPath,
    apply_rule1,
    apply_rule2,
    check_top_degree,
    check_high_degree_count,
    compute_forced_split_set,
    extract_core,
    kernelize,
    kernel_bound,
    replay_trace,
)
from bisplit.solution import NoCertificate
from helpers import C4, G, names, random_small_graph, vid
from test_graph import graphs

# b0 with three degree-2 top neighbours
FAN = ("t1 b0", "t2 b0", "t3 b0", "t1 x1", "t2 x2", "t3 x3")
# core {t0, b1, b2, b3}; a 9-vertex path t1..t5 joins b1 and b2; b3 carries t6 - b8
LONG_PATH = (
    "t0 b1", "t0 b2", "t0 b3",
    "t1 b1", "t1 b4", "t2 b4", "t2 b5", "t3 b5", "t3 b6", "t4 b6", "t4 b7", "t5 b7", "t5 b2",
    "t6 b3", "t6 b8",
)


def state_of(g, budget):
    return KernelState(graph=g, budget=budget)


class TestForcedSet:
    def test_fan(self):
        g = G(*FAN)
        assert names(g, compute_forced_split_set(g)) == {"b0"}

    def test_leaf_neighbour(self):
        g = G("t1 b0", "t2 b0", "t3 b0", "t1 x1", "t2 x2")
        assert compute_forced_split_set(g) == set()

    def test_empty(self):
        assert compute_forced_split_set(G()) == set()


class TestRule1:
    def test_forced_removed(self):
        g = G(*FAN)
        state, trace = apply_rule1(g, 1)
        assert state.budget == 0
        assert vid(g, "b0") not in state.graph
        assert names(g, state.forced_splits) == {"b0"}
        assert trace.of_type(RemovedForced)[0].neighbors == tuple(
            sorted(vid(g, t) for t in ("t1", "t2", "t3"))
        )

    def test_caterpillar_unchanged(self):
        g = G("t1 b1", "t2 b1", "t2 b2", "t3 b2")
        state, trace = apply_rule1(g, 2)
        assert state.graph == g and state.budget == 2 and len(trace) == 0

    def test_top_leaves_removed(self):
        g = G("t1 b0", "t2 b0", "t3 b0")
        state, trace = apply_rule1(g, 0)
        assert state.budget == 0
        assert names(state.graph, state.graph) == {"b0"}
        assert state.graph.degree(vid(g, "b0")) == 0
        leaves = trace.of_type(RemovedLeaf)
        assert {a.label for a in leaves} == {"t1", "t2", "t3"}
        assert all(a.side is Side.TOP for a in leaves)

    def test_hub_keeps_one_leaf(self):
        # t0 would be left with the single neighbour b1; it keeps its smallest leaf
        g = G("t0 b1", "t0 b2", "t0 b3", "t1 b1")
        state, _ = apply_rule1(g, 0)
        assert names(state.graph, state.graph.neighbors(vid(g, "t0"))) == {"b1", "b2"}

    def test_negative_k(self):
        with pytest.raises(ValueError):
            apply_rule1(G("t b"), -1)

    @settings(max_examples=200)
    @given(graphs(max_side=6), st.integers(0, 3))
    def test_bottom_degree_at_most_two(self, g, k):
        state, _ = apply_rule1(g, k)
        assert all(state.graph.degree(b) <= 2 for b in state.graph.bottom_vertices)
        assert state.forced_splits.isdisjoint(state.graph)


class TestRejectionChecks:
    def test_top_degree_degree3_budget0(self):
        g = G("t0 b1", "t0 b2", "t0 b3", "t1 b1", "t2 b2", "t3 b3")
        assert not check_top_degree(state_of(g, 0))

    def test_top_degree_budget1(self):
        g = G("t0 b1", "t0 b2", "t0 b3")
        assert check_top_degree(state_of(g, 1))

    def test_top_degree_empty(self):
        assert check_top_degree(state_of(G(), 0))

    def test_high_degree_one_high_budget0(self):
        assert not check_high_degree_count(state_of(G("t0 b1", "t0 b2", "t0 b3"), 0))

    def test_high_degree_two_high_budget1(self):
        g = G("t0 b1", "t0 b2", "t0 b3", "t1 b4", "t1 b5", "t1 b6")
        assert check_high_degree_count(state_of(g, 1))

    def test_high_degree_no_high(self):
        assert check_high_degree_count(state_of(G(*C4), 0))


class TestCore:
    def test_no_high(self):
        assert extract_core(state_of(G(*C4), 1)) == set()

    def test_one_high(self):
        g = G("t0 b1", "t0 b2", "t0 b3")
        assert names(g, extract_core(state_of(g, 1))) == {"t0", "b1", "b2", "b3"}

    def test_shared_neighbour(self):
        g = G("t0 b1", "t0 b2", "t0 b3", "t1 b3", "t1 b4", "t1 b5")
        core = extract_core(state_of(g, 1))
        assert names(g, core) == {"t0", "t1", "b1", "b2", "b3", "b4", "b5"}


class TestRule2:
    def test_cycle_removed(self):
        g = G("t1 b1", "t1 b2", "t2 b2", "t2 b3", "t3 b3", "t3 b1")
        state, trace = apply_rule2(*apply_rule1(g, 2))
        assert state.budget == 1
        assert len(state.graph) == 0
        (cyc,) = trace.of_type(RemovedCycle)
        assert names(g, state.cycle_splits) == {"b1"} == names(g, [cyc.split_vertex])

    def test_long_path_shortened(self):
        g = G(*LONG_PATH)
        state, trace = apply_rule2(*apply_rule1(g, 0))
        assert state.budget == 0
        (rec,) = state.paths
        assert [g.labels[v] for v in rec.original] == [
            "t1", "b4", "t2", "b5", "t3", "b6", "t4", "b7", "t5",
        ]
        assert len(rec.kernel_sequence) == 5
        assert len(trace.of_type(ShortenedPath)) == 2
        assert len(state.graph) == len(g) - 4
        assert replay_trace(state.graph, trace) == g

    def test_threshold_path_untouched(self):
        # 5-vertex path t1 b4 t2 b5 t3 between b1 and b2, threshold 2*0+5
        g = G("t0 b1", "t0 b2", "t0 b3", "t1 b1", "t1 b4", "t2 b4", "t2 b5", "t3 b5", "t3 b2",
              "t6 b3", "t6 b8")
        state, trace = apply_rule2(*apply_rule1(g, 0))
        assert state.paths == [] and state.graph == g and len(trace) == 0

    def test_free_path_removed(self):
        g = G("t0 b1", "t0 b2", "t0 b3", "t1 b1", "t2 b2", "t3 b3", "t9 b9", "t8 b9")
        state, _ = apply_rule2(*apply_rule1(g, 2))
        assert not names(g, state.graph) & {"t9", "t8", "b9"}


class TestKernelize:
    def test_caterpillar(self):
        g = G("t1 b1", "t2 b1", "t2 b2", "t1 b3")
        ker = kernelize(g, 0)
        assert not isinstance(ker, NoCertificate)
        assert ker.state.budget == 0 and is_biplanar(ker.graph)

    def test_c4_no(self):
        res = kernelize(G(*C4), 0)
        assert isinstance(res, NoCertificate)
        assert res.reason == "cycles exceed budget" and res.stats["k2"] == -1

    def test_spider_top_degree(self):
        res = kernelize(G("t0 b1", "t0 b2", "t0 b3", "t1 b1", "t2 b2", "t3 b3"), 0)
        assert isinstance(res, NoCertificate) and res.reason == "top degree bound"

    def test_too_many_forced(self):
        g = G(*FAN, *(e.replace("0", "9").replace("t", "s").replace("x", "y") for e in FAN))
        res = kernelize(g, 1)
        assert isinstance(res, NoCertificate) and res.reason == "forced splits exceed budget"

    def test_unknown_engine(self):
        with pytest.raises(ValueError):
            kernelize(G("t b"), 0, engine="magic")

    def test_kernel_bound_values(self):
        assert kernel_bound(1, 0) == 225
        assert kernel_bound(0, 3) == 0
        assert kernel_bound(-1, 2) == 0


def _same(a, b):
    if isinstance(a, NoCertificate) or isinstance(b, NoCertificate):
        return a == b and a.stats == b.stats
    sa, sb = a.state, b.state
    return (
        sa.graph == sb.graph
        and sa.graph.origin == sb.graph.origin
        and sa.budget == sb.budget
        and sa.budgets == sb.budgets
        and sa.core == sb.core
        and sa.forced_splits == sb.forced_splits
        and sa.cycle_splits == sb.cycle_splits
        and sa.paths == sb.paths
        and sa.stats == sb.stats
        and a.trace == b.trace
    )


class TestEngines:
    def test_random_small(self):
        rng = random.Random(11)
        for _ in range(800):
            g = random_small_graph(rng, max_n=14, max_m=20)
            for k in range(4):
                assert _same(kernelize(g, k), kernelize(g, k, engine="reference")), (g.edges(), k)

    @pytest.mark.parametrize("seed", range(6))
    def test_structured(self, seed):
        for g in (planted(300, 3, seed), caterpillar(300, seed), random_bipartite(400, 300, seed)):
            for k in (0, 2, 5, 40):
                assert _same(kernelize(g, k), kernelize(g, k, engine="reference"))


class TestProperties:
    @settings(max_examples=300, deadline=None)
    @given(graphs(max_side=7), st.integers(0, 4))
    def test_replay_and_bound(self, g, k):
        ker = kernelize(g, k)
        if isinstance(ker, NoCertificate):
            return
        s = ker.state
        assert len(ker.graph) <= kernel_bound(s.budgets["k1"], s.budget) == s.stats["kernel_bound"]
        assert s.forced_splits.isdisjoint(ker.graph)
        assert replay_trace(ker.graph, ker.trace) == g

    def test_replay_long_paths(self):
        for seed in range(5):
            g = planted(2000, 2, seed)
            ker = kernelize(g, 2)
            assert replay_trace(ker.graph, ker.trace) == g
