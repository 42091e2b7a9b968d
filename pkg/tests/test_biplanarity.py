from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisplit.biplanarity import Drawing, DrawingError, count_crossings, is_biplanar, layout
from bisplit.generate import caterpillar
from bisplit.graph import BipartiteGraph
from helpers import C4, PATH5, SPIDER, G, vid
from test_graph import graphs


def order(g, *names):
    return tuple(vid(g, n) for n in names)


def naive_crossings(g: BipartiteGraph, d: Drawing) -> int:
    tp = {v: i for i, v in enumerate(d.top_order)}
    bp = {v: i for i, v in enumerate(d.bottom_order)}
    return sum(
        1
        for (t1, b1), (t2, b2) in itertools.combinations(g.edges(), 2)
        if (tp[t1] - tp[t2]) * (bp[b1] - bp[b2]) < 0
    )


class TestIsBiplanar:
    def test_path(self):
        assert is_biplanar(G(*PATH5))

    def test_c4(self):
        assert not is_biplanar(G(*C4))

    def test_spider(self):
        assert not is_biplanar(G(*SPIDER))

    def test_degenerate(self):
        assert is_biplanar(BipartiteGraph())
        assert is_biplanar(G(tops=["t"]))
        assert is_biplanar(G("t b"))

    def test_relabel_invariance(self):
        rng = random.Random(3)
        for _ in range(50):
            g = caterpillar(rng.randint(1, 20), rng.randint(0, 99))
            edges = [(g.labels[t], g.labels[b]) for t, b in g.edges()]
            rng.shuffle(edges)
            h = BipartiteGraph.from_edges([("x" + t, "y" + b) for t, b in edges])
            assert is_biplanar(h)


class TestLayout:
    def test_single_edge(self):
        g = G("t1 b1")
        assert layout(g) == Drawing(order(g, "t1"), order(g, "b1"))

    def test_star(self):
        g = G("t1 b1", "t1 b2", "t1 b3")
        assert count_crossings(g, layout(g)) == 0

    def test_path(self):
        g = G(*PATH5)
        d = layout(g)
        assert d == Drawing(order(g, "t1", "t2", "t3"), order(g, "b1", "b2"))
        assert count_crossings(g, d) == 0

    def test_rejects_cycle(self):
        with pytest.raises(DrawingError):
            layout(G(*C4))

    def test_rejects_spider(self):
        with pytest.raises(DrawingError):
            layout(G(*SPIDER))

    @given(st.integers(0, 60), st.integers(0, 10**6))
    def test_caterpillars_draw_planar(self, n, seed):
        g = caterpillar(n, seed)
        assert is_biplanar(g)
        d = layout(g)
        d.check_against(g)
        assert count_crossings(g, d) == 0


class TestCountCrossings:
    def test_one_inversion(self):
        g = G("t1 b2", "t2 b1")
        assert count_crossings(g, Drawing(order(g, "t1", "t2"), order(g, "b1", "b2"))) == 1

    def test_inversion_removed(self):
        g = G("t1 b2", "t2 b1")
        assert count_crossings(g, Drawing(order(g, "t1", "t2"), order(g, "b2", "b1"))) == 0

    def test_k22_minimum_is_one(self):
        g = G(*C4)
        counts = [
            count_crossings(g, Drawing(tp, bp))
            for tp in itertools.permutations(g.top_vertices)
            for bp in itertools.permutations(g.bottom_vertices)
        ]
        assert min(counts) == 1

    def test_bad_drawing(self):
        g = G("t1 b1")
        with pytest.raises(DrawingError):
            count_crossings(g, Drawing((), order(g, "b1")))

    @given(graphs(max_side=5), st.randoms(use_true_random=False))
    def test_matches_pairwise_count(self, g, rng):
        tops, bottoms = sorted(g.top_vertices), sorted(g.bottom_vertices)
        rng.shuffle(tops)
        rng.shuffle(bottoms)
        d = Drawing(tuple(tops), tuple(bottoms))
        assert count_crossings(g, d) == naive_crossings(g, d)
