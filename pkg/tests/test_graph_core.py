import itertools

import networkx as nx
import numpy as np
import pytest

from src.errors import EdgeListFormatError, Graph6ParseError, InvalidParameterError, NotEquitableError
from src.exact_linalg import identity, mat_mul, mat_vec
from src.graph_core import (
    Graph,
    Partition,
    adjacency_matrix,
    build_dynkin_d,
    characteristic_matrix,
    complete_graph,
    divisor_of_partition,
    dynkin_partition,
    emit_edge_list,
    emit_graph6,
    empty_graph,
    erdos_renyi,
    from_adjacency,
    parse_edge_list,
    parse_graph6,
    path_graph,
    random_corpus,
    read_graph,
)

from .conftest import B_D5_ROWS


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u - 1, v - 1) for u, v in g.edges)
    return h


class TestDynkin:
    def test_d5_edges(self):
        assert build_dynkin_d(5).sorted_edges() == [(1, 3), (2, 3), (3, 4), (4, 5)]

    def test_d4_is_star_on_vertex_3(self):
        g = build_dynkin_d(4)
        assert g.sorted_edges() == [(1, 3), (2, 3), (3, 4)]
        assert g.degrees() == (1, 1, 3, 1)

    def test_d10_structure(self):
        g = build_dynkin_d(10)
        assert len(g.edges) == 9
        assert sorted(g.degrees()).count(3) == 1
        assert g.degrees()[2] == 3
        h = to_networkx(g)
        assert nx.is_tree(h)
        assert nx.diameter(h) == 8

    @pytest.mark.parametrize("n", [-1, 0, 1, 2, 3])
    def test_small_n_rejected(self, n):
        with pytest.raises(InvalidParameterError):
            build_dynkin_d(n)

    def test_adjacency_row_sums(self):
        a = adjacency_matrix(build_dynkin_d(5))
        assert mat_vec(a, [1] * 5) == (1, 1, 3, 2, 1)

    @pytest.mark.parametrize("n", range(4, 65))
    def test_adjacency_symmetric_with_tree_edge_count(self, n):
        a = adjacency_matrix(build_dynkin_d(n))
        rows = a.to_lists()
        assert all(rows[i][j] == rows[j][i] for i in range(n) for j in range(n))
        assert sum(sum(r) for r in rows) == 2 * (n - 1)
        assert all(rows[i][i] == 0 for i in range(n))


class TestGraph:
    def test_empty_graph_has_zero_adjacency(self):
        assert adjacency_matrix(empty_graph(3)).to_lists() == [[0] * 3] * 3

    def test_complete_graph_adjacency(self):
        a = adjacency_matrix(complete_graph(4)).to_lists()
        assert a == [[0 if i == j else 1 for j in range(4)] for i in range(4)]

    def test_rejects_self_loop_and_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            Graph(3, frozenset({(2, 2)}))
        with pytest.raises(InvalidParameterError):
            Graph(3, frozenset({(1, 4)}))

    def test_from_edges_rejects_duplicates(self):
        with pytest.raises(InvalidParameterError):
            Graph.from_edges(3, [(1, 2), (2, 1)])

    def test_edges_are_normalized(self):
        assert Graph(3, frozenset({(3, 1)})).sorted_edges() == [(1, 3)]

    def test_neighbors_and_relabel(self):
        g = path_graph(4)
        assert g.neighbors(2) == [1, 3]
        assert g.relabel([4, 3, 2, 1]) == g
        assert g.relabel([2, 1, 3, 4]).sorted_edges() == [(1, 2), (1, 3), (3, 4)]
        with pytest.raises(InvalidParameterError):
            g.relabel([1, 1, 2, 3])

    def test_from_adjacency_inverts_adjacency(self):
        g = build_dynkin_d(7)
        assert from_adjacency(adjacency_matrix(g)) == g


class TestPartitions:
    def test_dynkin_partition(self):
        assert dynkin_partition(5).cells == (frozenset({1, 2}), frozenset({3}), frozenset({4}), frozenset({5}))
        assert len(dynkin_partition(4)) == 3
        p6 = dynkin_partition(6)
        assert len(p6) == 5 and len(p6.cells[0]) == 2

    def test_dynkin_partition_small_n(self):
        with pytest.raises(InvalidParameterError):
            dynkin_partition(3)

    def test_parse(self):
        assert Partition.parse("1,2;3;4") == Partition.of([[1, 2], [3], [4]])
        with pytest.raises(InvalidParameterError):
            Partition.parse("1,x;2")

    def test_overlapping_cells_rejected(self):
        with pytest.raises(InvalidParameterError):
            Partition.of([[1, 2], [2, 3]])

    def test_characteristic_matrix_needs_cover(self):
        with pytest.raises(InvalidParameterError):
            characteristic_matrix(Partition.of([[1], [2]]), 3)

    def test_divisor_of_d5(self):
        data = divisor_of_partition(build_dynkin_d(5), dynkin_partition(5))
        assert data.B.to_lists() == B_D5_ROWS
        assert data.C.shape == (5, 4)
        assert [sum(r) for r in data.C.to_lists()] == [1] * 5

    def test_singleton_partition_gives_adjacency(self):
        g = build_dynkin_d(6)
        data = divisor_of_partition(g, Partition.of([[v] for v in range(1, 7)]))
        assert data.B == adjacency_matrix(g)
        assert data.C == identity(6)

    def test_path_folding(self):
        data = divisor_of_partition(path_graph(4), Partition.parse("1,4;2,3"))
        assert data.B.to_lists() == [[0, 1], [1, 1]]

    def test_not_equitable_names_cells(self):
        with pytest.raises(NotEquitableError) as info:
            divisor_of_partition(path_graph(4), Partition.parse("1,2;3,4"))
        assert info.value.cells == (1, 2)

    @pytest.mark.parametrize("n", range(4, 65))
    def test_dynkin_partition_is_equitable(self, n):
        g = build_dynkin_d(n)
        data = divisor_of_partition(g, dynkin_partition(n))
        assert mat_mul(adjacency_matrix(g), data.C) == mat_mul(data.C, data.B)
        assert mat_vec(data.C, [1] * (n - 1)) == (1,) * n


class TestGraph6:
    def test_single_vertex(self):
        assert emit_graph6(empty_graph(1)) == "@"
        assert parse_graph6("@") == empty_graph(1)

    def test_header_and_newline_accepted(self):
        assert parse_graph6(">>graph6<<@\n") == empty_graph(1)

    def test_all_five_vertex_graphs_round_trip(self):
        pairs = list(itertools.combinations(range(1, 6), 2))
        for mask in range(1 << len(pairs)):
            g = Graph(5, frozenset(p for k, p in enumerate(pairs) if mask >> k & 1))
            assert parse_graph6(emit_graph6(g)) == g

    def test_matches_networkx_encoding(self):
        for g in random_corpus(300, 30, seed=7):
            expected = nx.to_graph6_bytes(to_networkx(g), header=False).decode().strip()
            assert emit_graph6(g) == expected
            assert parse_graph6(expected) == g

    def test_long_form(self):
        g = path_graph(70)
        code = emit_graph6(g)
        assert code.startswith("~")
        assert code == nx.to_graph6_bytes(to_networkx(g), header=False).decode().strip()
        assert parse_graph6(code) == g

    def test_dynkin_round_trip(self):
        g = build_dynkin_d(5)
        assert parse_graph6(emit_graph6(g)).sorted_edges() == [(1, 3), (2, 3), (3, 4), (4, 5)]

    @pytest.mark.parametrize("text, offset", [
        ("", 0),
        ("A", 1),
        ("A__", 2),
        ("Ab", 1),
        ("A\x01", 1),
        ("?", 0),
        ("~??", 3),
    ])
    def test_malformed_input_reports_offset(self, text, offset):
        with pytest.raises(Graph6ParseError) as info:
            parse_graph6(text)
        assert info.value.offset == offset
        assert f"graph6 byte {offset}" in str(info.value)

    def test_round_trip_on_large_corpus(self):
        for g in random_corpus(1000, 30, seed=2024):
            assert parse_graph6(emit_graph6(g)) == g


class TestEdgeList:
    def test_emit(self):
        assert emit_edge_list(build_dynkin_d(5)) == "5\n1 3\n2 3\n3 4\n4 5\n"

    def test_parse_with_comments(self):
        g = parse_edge_list("# D_4\n4\n1 3\n\n2 3  # twin\n3 4\n")
        assert g == build_dynkin_d(4)

    @pytest.mark.parametrize("text, line", [
        ("", 1),
        ("x\n", 1),
        ("3\n1 2\n2 2\n", 3),
        ("3\n1 4\n", 2),
        ("3\n1 2 3\n", 2),
        ("3\n1 2\n2 1\n", 3),
    ])
    def test_errors_name_the_line(self, text, line):
        with pytest.raises(EdgeListFormatError) as info:
            parse_edge_list(text)
        assert info.value.line == line

    def test_read_graph_detects_format(self):
        g = build_dynkin_d(6)
        assert read_graph(emit_graph6(g)) == g
        assert read_graph(emit_graph6(g) + "\n") == g
        assert read_graph(emit_edge_list(g)) == g
        assert read_graph(">>graph6<<" + emit_graph6(g)) == g


class TestCorpus:
    def test_deterministic(self):
        assert list(random_corpus(50, 12, seed=42)) == list(random_corpus(50, 12, seed=42))

    def test_different_seeds_differ(self):
        assert list(random_corpus(50, 12, seed=1)) != list(random_corpus(50, 12, seed=2))

    def test_vertex_counts_in_range(self):
        ns = [g.n for g in random_corpus(500, 16, seed=42)]
        assert min(ns) >= 1 and max(ns) <= 16
        assert len(set(ns)) > 8

    def test_erdos_renyi_extremes(self):
        rng = np.random.Generator(np.random.PCG64(0))
        assert erdos_renyi(6, rng, p=0.0) == empty_graph(6)
        assert erdos_renyi(6, rng, p=1.0) == complete_graph(6)

    def test_bad_arguments(self):
        with pytest.raises(InvalidParameterError):
            list(random_corpus(0, 5, seed=1))
