import io

import numpy as np
import pytest

from bdsw_qaoa import ParseError, WeightedGraph, cut_value, format_rudy, maxcut_to_qubo, parse_rudy
from conftest import all_assignments, random_graph


class TestParseRudy:
    def test_triangle(self):
        g = parse_rudy("3 3\n1 2 1\n2 3 1\n1 3 1")
        assert g.num_vertices == 3
        assert g.edges == ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0))

    def test_single_weighted_edge(self):
        g = parse_rudy("2 1\n1 2 5\n")
        assert g.edges == ((0, 1, 5.0),)

    def test_stream_and_blank_lines(self):
        g = parse_rudy(io.StringIO("\n4 2\n\n4 1 -1\n2 3 1\n"))
        assert g.edges == ((0, 3, -1.0), (1, 2, 1.0))

    @pytest.mark.parametrize(
        "text, line",
        [
            ("3 3\n1 2 1\n2 3\n1 3 1", 3),  # missing weight
            ("2 1\n1 3 1", 2),  # vertex out of range
            ("2 1\n0 2 1", 2),  # 1-indexed input
            ("3 2\n1 2 1\n2 1 4", 3),  # duplicate in either orientation
            ("3 1\n2 2 1", 2),  # self loop
            ("3 x\n", 1),
            ("3 3\n1 2 1\n2 3 1", 3),  # header count mismatch
        ],
    )
    def test_errors_name_line(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_rudy(text)
        assert exc.value.line == line
        assert f"line {line}" in str(exc.value)

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_rudy("")

    def test_round_trip(self, rng):
        g = random_graph(rng, 30, 0.2, weights=(-1.0, 1.0, 2.5))
        back = parse_rudy(format_rudy(g))
        assert back.num_vertices == g.num_vertices
        assert back.edges == g.edges


class TestWeightedGraph:
    def test_rejects_unordered_edge(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((2, 1, 1.0),))

    def test_from_edges_orders(self):
        assert WeightedGraph.from_edges(3, [(2, 1, 1.0)]).edges == ((1, 2, 1.0),)


class TestMaxCutEncoding:
    def test_single_edge(self):
        q = maxcut_to_qubo(WeightedGraph(2, ((0, 1, 1.0),)))
        assert dict(q.coeffs) == {(0, 0): -1.0, (1, 1): -1.0, (0, 1): 2.0}
        values = [q.evaluate(x) for x in all_assignments(2)]
        assert values == [0.0, -1.0, -1.0, 0.0]

    def test_triangle_minimum(self, triangle):
        q = maxcut_to_qubo(triangle)
        values = [q.evaluate(x) for x in all_assignments(3)]
        assert min(values) == -2
        assert values.count(-2) == 6

    def test_empty_graph(self):
        q = maxcut_to_qubo(WeightedGraph(4, ()))
        assert len(q) == 0
        assert q.evaluate([1, 0, 1, 1]) == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_encoding_correct(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, int(rng.integers(2, 11)), 0.5, weights=(-2.0, 1.0, 3.0))
        q = maxcut_to_qubo(g)
        for x in all_assignments(g.num_vertices):
            assert q.evaluate(x) == pytest.approx(-cut_value(g, x))


class TestCutValue:
    def test_examples(self, triangle):
        assert cut_value(triangle, [0, 0, 0]) == 0
        assert cut_value(triangle, [1, 0, 0]) == 2
        assert cut_value(WeightedGraph(2, ((0, 1, 5.0),)), [0, 1]) == 5

    def test_mismatch(self, triangle):
        with pytest.raises(ValueError):
            cut_value(triangle, [0, 1])
