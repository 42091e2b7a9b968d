from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisplit.biplanarity import count_crossings
from bisplit.generate import caterpillar, planted, random_bipartite
from bisplit.io import (
    ParseError,
    canonical_form,
    format_json,
    format_text,
    parse_instance,
    parse_result_text,
    result_fields,
    serialize_instance,
)
from bisplit.pipeline import solve
from helpers import C4, G
from test_graph import graphs

C4_TEXT = """c the 4-cycle
p bip 2 2 4
e t1 b1
e t1 b2
e t2 b1
e t2 b2
"""


def parse(text: str):
    return parse_instance(text.splitlines())


class TestParse:
    def test_c4(self):
        g = parse(C4_TEXT)
        assert canonical_form(g) == canonical_form(G(*C4))

    def test_isolated_vertex_lines(self):
        g = parse("p bip 2 1 1\nv t lone\ne t1 b1\n")
        assert len(g) == 3 and g.num_edges() == 1

    def test_same_name_in_both_layers(self):
        g = parse("p bip 1 1 1\ne x x\n")
        assert g.num_edges() == 1

    @pytest.mark.parametrize(
        "text,lineno",
        [
            ("p bip x\n", 1),
            ("p bip 1 1 1\ne t1 b1\ne t1 b1\n", 3),
            ("c hi\np bip 2 2 2\ne t1 b1\n", 2),
            ("e t1 b1\n", 1),
            ("p bip 1 1 1\nq t1 b1\n", 2),
            ("p bip 1 1 1\ne t1\n", 2),
            ("", 0),
            ("p bip 1 1 1\np bip 1 1 1\n", 2),
            ("p bip -1 1 1\n", 1),
        ],
    )
    def test_errors_carry_line_numbers(self, text, lineno):
        with pytest.raises(ParseError) as err:
            parse(text)
        assert err.value.lineno == lineno
        assert str(err.value).startswith(f"line {lineno}:")


class TestRoundTrip:
    @pytest.mark.parametrize("seed", range(5))
    def test_generated(self, seed):
        for g in (caterpillar(40, seed), planted(40, 2, seed), random_bipartite(30, 60, seed)):
            h = parse(serialize_instance(g))
            assert canonical_form(h) == canonical_form(g)

    @settings(max_examples=80)
    @given(graphs())
    def test_any_graph(self, g):
        assert canonical_form(parse(serialize_instance(g, "x\ny"))) == canonical_form(g)


class TestResultDocument:
    def test_yes_fields(self):
        out = solve(G(*C4), 1)
        doc = result_fields(out, stats=True)
        assert doc["decision"] == "YES" and doc["k"] == 1
        assert doc["split_vertices"] == 1 and doc["crossings"] == 0
        assert doc["crossings"] == count_crossings(out.split_graph, out.drawing)
        assert doc["bottom_order"] == ["b1#1", "b2", "b1#2"]
        assert doc["kernel_bound"] == 225 and doc["cycle_splits"] == ["b1"]

    def test_no_fields(self):
        doc = result_fields(solve(G(*C4), 0))
        assert doc["decision"] == "NO" and "reason" in doc and "crossings" not in doc

    def test_text_and_json_agree(self):
        doc = result_fields(solve(planted(50, 2, 3), 2), stats=True)
        fields = parse_result_text(format_text(doc))
        back = json.loads(format_json(doc))
        assert back == doc
        assert fields["decision"] == back["decision"]
        assert int(fields["crossings"]) == back["crossings"] == 0
        assert fields["top_order"].split() == back["top_order"]

    def test_text_split_lines(self):
        text = format_text(result_fields(solve(G(*C4), 1)))
        assert "split b1: {t1} | {t2}" in text.splitlines()

    def test_kernel_only_lists_kernel(self):
        doc = result_fields(solve(G(*C4, "t3 b1", "t3 b2"), 2, "kernel-only"), stats=True)
        assert doc["decision"] == "UNDECIDED"
        assert len(doc["kernel_graph"]) == doc["kernel_edges"]
