"""
Tests for the graph model and the edge-list format.
"""

import numpy as np
import pytest

from src.graph.graph_model import Graph, load_graph, parse_edge_list, serialize_edge_list
from src.partition.partition_model import Partition
from src.utils.exceptions import (
    DegenerateComputationError,
    InputError,
    PartitionMismatchError,
    UnknownNodeError,
)


def path_graph(n: int) -> Graph:
    return Graph.from_edges((i, i + 1) for i in range(1, n))


class TestParseEdgeList:

    def test_simple_edges(self):
        g = parse_edge_list("1 2\n2 3")
        assert g.node_count == 3
        assert g.edge_count == 2
        assert not g.is_weighted

    def test_duplicate_undirected_edge_names_line(self):
        with pytest.raises(InputError) as excinfo:
            parse_edge_list("1 2\n2 1", source="g.txt")
        assert excinfo.value.line == 2
        assert "duplicate undirected edge" in str(excinfo.value)
        assert str(excinfo.value).startswith("g.txt:2:")

    def test_weights_comments_and_isolated_nodes(self):
        g = parse_edge_list(b"1 2 0.5\n# comment\n3")
        assert g.node_count == 3
        assert g.edge_count == 1
        assert g.is_weighted
        assert g.degree("3") == 0
        assert g.strength("1") == 0.5

    def test_blank_lines_ignored(self):
        g = parse_edge_list("\n1 2\n\n   \n2 3\n")
        assert g.edge_count == 2

    @pytest.mark.parametrize("text,reason,line", [
        ("1 2\n3 3", "self-loop", 2),
        ("1 2 0", "non-positive edge weight", 1),
        ("1 2 -1.5", "non-positive edge weight", 1),
        ("1 2 abc", "malformed weight", 1),
        ("1 2\n1 2 3 4", "malformed line", 2),
    ])
    def test_rejected_lines(self, text, reason, line):
        with pytest.raises(InputError) as excinfo:
            parse_edge_list(text, source="edges")
        assert reason in str(excinfo.value)
        assert excinfo.value.line == line

    def test_invalid_utf8(self):
        with pytest.raises(InputError):
            parse_edge_list(b"\xff\xfe 1 2")

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(InputError) as excinfo:
            load_graph(tmp_path / "missing.txt")
        assert excinfo.value.exit_code == 2

    def test_round_trip(self, write):
        text = "a b\nb c 2.5\nc d 0.125\nisolated\n"
        g = parse_edge_list(text)
        again = load_graph(write("g.txt", serialize_edge_list(g)))
        assert set(again.nodes) == set(g.nodes)
        assert sorted(again.edges()) == sorted(g.edges())


class TestDegrees:

    def test_path_degree(self):
        assert path_graph(3).degree(2) == 2

    def test_clique_degree(self):
        clique = Graph.from_edges((i, j) for i in range(5) for j in range(i + 1, 5))
        assert all(clique.degree(u) == 4 for u in range(5))

    def test_unknown_node(self):
        with pytest.raises(UnknownNodeError):
            path_graph(3).degree(42)

    def test_max_degree(self):
        star = Graph.from_edges((0, leaf) for leaf in range(1, 5))
        assert star.max_degree() == 4
        assert path_graph(4).max_degree() == 2
        assert Graph.from_edges([], nodes=[1, 2, 3]).max_degree() == 0

    def test_max_degree_of_empty_graph(self):
        with pytest.raises(DegenerateComputationError):
            Graph.from_edges([]).max_degree()

    def test_handshake(self, figure_graph):
        assert figure_graph.degrees().sum() == 2 * figure_graph.edge_count

    def test_adjacency_is_symmetric(self, figure_graph):
        for u in figure_graph.nodes:
            for v in figure_graph.neighbors(u):
                assert u in figure_graph.neighbors(v)


class TestPartitionRelative:

    def test_internal_degree_on_path(self):
        g = path_graph(4)
        p = Partition.from_parts([[1, 2], [3, 4]])
        assert g.internal_degree(p, 2) == 1
        assert g.embeddedness(p, 2) == 0.5

    def test_single_community_gives_full_degree(self, figure_graph):
        p = Partition.single_part(figure_graph.nodes)
        np.testing.assert_array_equal(figure_graph.internal_degrees(p), figure_graph.degrees())
        assert np.all(figure_graph.embeddedness_values(p) == 1.0)

    def test_singletons_give_zero(self, figure_graph):
        p = Partition.singletons(figure_graph.nodes)
        assert not figure_graph.internal_degrees(p).any()
        assert not figure_graph.embeddedness_values(p).any()

    def test_embeddedness_extremes(self, figure_graph, figure_reference):
        assert figure_graph.embeddedness(figure_reference, 2) == 1.0
        p = Partition.from_parts([[1, 3], [2, 4, 5], range(6, 11)])
        assert figure_graph.embeddedness(p, 1) == 0.5
        lonely = Partition.from_parts([[1], [2, 3, 4, 5], range(6, 11)])
        assert figure_graph.embeddedness(lonely, 1) == 0.0

    def test_isolated_node_embeddedness_is_zero(self):
        g = Graph.from_edges([(1, 2)], nodes=[3])
        p = Partition.single_part(g.nodes)
        assert g.embeddedness(p, 3) == 0.0

    def test_internal_degree_bounds(self, figure_graph, hub_moved):
        internal = figure_graph.internal_degrees(hub_moved)
        assert np.all(internal >= 0)
        assert np.all(internal <= figure_graph.degrees())

    def test_uncovering_partition(self, figure_graph):
        p = Partition.from_parts([range(1, 10)])
        with pytest.raises(PartitionMismatchError):
            figure_graph.internal_degrees(p)


class TestStrength:

    def test_unweighted_strength_is_degree(self, figure_graph):
        np.testing.assert_array_equal(figure_graph.strengths(), figure_graph.degrees())

    def test_weighted_strength(self):
        g = Graph.from_edges([(1, 2, 0.5), (1, 3, 2.0)], nodes=[4])
        assert g.strength(1) == 2.5
        assert g.strength(4) == 0.0

    def test_internal_strength(self):
        g = Graph.from_edges([(1, 2, 0.5), (1, 3, 2.0)])
        p = Partition.from_parts([[1, 2], [3]])
        assert g.internal_strength(p, 1) == 0.5
        assert g.internal_strength(p, 3) == 0.0


def test_graph_rejects_invalid_edges():
    with pytest.raises(InputError):
        Graph.from_edges([(1, 1)])
    with pytest.raises(InputError):
        Graph.from_edges([(1, 2), (2, 1)])
    with pytest.raises(InputError):
        Graph.from_edges([(1, 2, 0.0)])
