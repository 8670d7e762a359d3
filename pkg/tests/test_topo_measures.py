"""
Tests for the topology-weighted purity and F-measure.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.evaluation.classic_measures import f_measure, purity
from src.evaluation.topo_measures import (
    NodeWeights,
    WeightScheme,
    ZeroWeightPolicy,
    node_contributions,
    node_weights,
    resolve_weights,
    topo_f_measure,
    topo_scores,
    uniform_weights,
    weighted_purity,
)
from src.graph.graph_model import Graph
from src.partition.partition_model import Partition
from src.utils.exceptions import DegenerateComputationError, PartitionMismatchError


class TestNodeWeights:

    def test_internal_degree_weights(self, figure_graph, figure_reference):
        w = node_weights(figure_graph, figure_reference)
        expected = {1: .5, 2: 1.0, 3: .5, 4: .5, 5: .5, 6: .25, 7: .75, 8: .75, 9: .75, 10: .5}
        for node, value in expected.items():
            assert w.weight(node) == value
        assert w.total == 6.0

    def test_uniform(self, figure_graph, figure_reference):
        w = node_weights(figure_graph, figure_reference, WeightScheme.UNIFORM)
        assert np.allclose(w.values, 0.1)

    def test_degree_scheme(self, figure_graph, figure_reference):
        w = node_weights(figure_graph, figure_reference, 'degree')
        assert w.weight(2) == 1.0
        assert w.weight(6) == 0.75

    def test_strength_scheme(self):
        g = Graph.from_edges([(1, 2, 2.0), (2, 3, 1.0), (3, 4, 4.0)])
        p = Partition.from_parts([[1, 2], [3, 4]])
        w = node_weights(g, p, WeightScheme.STRENGTH)
        # max strength is node 3 with 5.0
        assert w.weight(1) == pytest.approx(2.0 / 5.0)
        assert w.weight(2) == pytest.approx(2.0 / 5.0)
        assert w.weight(3) == pytest.approx(4.0 / 5.0)

    def test_edgeless_graph(self):
        g = Graph.from_edges([], nodes=[1, 2])
        p = Partition.single_part([1, 2])
        with pytest.raises(DegenerateComputationError):
            node_weights(g, p)
        assert node_weights(g, p, WeightScheme.UNIFORM).total == pytest.approx(1.0)

    def test_rejects_negative_values(self):
        with pytest.raises(ValueError):
            NodeWeights(("a",), np.array([-1.0]), WeightScheme.UNIFORM)

    def test_aligned_requires_same_nodes(self, figure_graph, figure_reference):
        w = node_weights(figure_graph, figure_reference)
        with pytest.raises(PartitionMismatchError):
            w.aligned(["1", "2"])


class TestTopoF:

    def test_hub_move_costs_more_than_boundary_move(
        self, figure_graph, figure_reference, hub_moved, boundary_moved
    ):
        hub = topo_f_measure(hub_moved, figure_reference, figure_graph)
        boundary = topo_f_measure(boundary_moved, figure_reference, figure_graph)
        assert hub < 0.9 < boundary
        assert hub == pytest.approx(5 / 6, abs=1e-12)
        assert boundary == pytest.approx(5.75 / 6, abs=1e-12)

    def test_uniform_weights_reduce_to_classic(
        self, figure_graph, figure_reference, hub_moved, boundary_moved
    ):
        for moved in (hub_moved, boundary_moved):
            score = topo_f_measure(moved, figure_reference, figure_graph, WeightScheme.UNIFORM)
            assert score == pytest.approx(0.9, abs=1e-12)

    def test_identity(self, figure_graph, figure_reference):
        assert topo_f_measure(figure_reference, figure_reference, figure_graph) == 1.0

    def test_equal_weights_give_classic_f(self):
        # disjoint cliques: every node has the same internal degree
        edges = [(c * 4 + i, c * 4 + j) for c in range(3) for i in range(4) for j in range(i + 1, 4)]
        g = Graph.from_edges(edges)
        reference = Partition.from_parts([range(c * 4, c * 4 + 4) for c in range(3)])
        estimated = reference.moved({0: "1", 5: "2"})
        assert topo_f_measure(estimated, reference, g) == pytest.approx(
            f_measure(estimated, reference), abs=1e-12
        )

    def test_weights_anchored_on_reference(self, figure_graph, figure_reference, hub_moved):
        scores = topo_scores(hub_moved, figure_reference, figure_graph)
        w = node_weights(figure_graph, figure_reference)
        assert scores.purity == weighted_purity(hub_moved, figure_reference, w)
        assert scores.inverse_purity == weighted_purity(figure_reference, hub_moved, w)
        assert not scores.fell_back_to_uniform

    def test_moving_heavier_node_costs_more(self, figure_graph, figure_reference):
        heavy = figure_reference.moved({7: "0"})
        light = figure_reference.moved({10: "0"})
        assert (topo_f_measure(heavy, figure_reference, figure_graph)
                < topo_f_measure(light, figure_reference, figure_graph))
        assert purity(heavy, figure_reference) == purity(light, figure_reference)


class TestZeroWeights:

    @pytest.fixture
    def matching(self):
        # every edge crosses the reference communities
        g = Graph.from_edges([(1, 2), (3, 4)])
        reference = Partition.from_parts([[1, 3], [2, 4]])
        return g, reference

    def test_error_policy(self, matching):
        g, reference = matching
        with pytest.raises(DegenerateComputationError):
            topo_scores(reference, reference, g)

    def test_uniform_policy(self, matching):
        g, reference = matching
        estimated = Partition.from_parts([[1, 2], [3, 4]])
        scores = topo_scores(estimated, reference, g, on_zero_weights=ZeroWeightPolicy.UNIFORM)
        assert scores.fell_back_to_uniform
        assert scores.scheme is WeightScheme.UNIFORM
        assert scores.f_measure == pytest.approx(f_measure(estimated, reference), abs=1e-12)

    def test_resolve_weights_reports_fallback(self, matching):
        g, reference = matching
        weights, fell_back = resolve_weights(g, reference, on_zero_weights='uniform')
        assert fell_back
        assert weights.total == pytest.approx(1.0)

    def test_weighted_purity_rejects_zero_total(self):
        p = Partition.single_part(["a", "b"])
        zero = NodeWeights(("a", "b"), np.zeros(2), WeightScheme.INTERNAL_DEGREE)
        with pytest.raises(DegenerateComputationError):
            weighted_purity(p, p, zero)


def test_contributions_sum_to_lost_score(figure_graph, figure_reference, hub_moved):
    w = node_weights(figure_graph, figure_reference)
    table = node_contributions(hub_moved, figure_reference, w)
    assert list(table.columns) == ['node', 'community', 'weight', 'share', 'purity', 'lost']
    assert table['share'].sum() == pytest.approx(1.0)
    assert table['lost'].sum() == pytest.approx(1 - weighted_purity(hub_moved, figure_reference, w))
    lost = table.set_index('node')['lost']
    assert lost['2'] == pytest.approx(1 / 6)
    assert lost.drop('2').sum() == 0.0


def test_uniform_weights_helper():
    w = uniform_weights(["a", "b", "c", "d"])
    assert w.total == pytest.approx(1.0)
    assert w.scheme is WeightScheme.UNIFORM


class TestPathFour:

    def test_weights(self, path_four, path_partition):
        w = node_weights(path_four, path_partition)
        assert w.values.tolist() == [0.5] * 4

    def test_weighted_purity(self, path_four, path_partition):
        w = node_weights(path_four, path_partition)
        assert weighted_purity(path_partition, path_partition, w) == 1.0
        moved = path_partition.moved({2: "1"})
        assert weighted_purity(moved, path_partition, w) == pytest.approx(0.75, abs=1e-12)

    def test_all_weight_on_one_node(self, path_partition):
        w = NodeWeights(path_partition.nodes, np.array([1.0, 0.0, 0.0, 0.0]), WeightScheme.INTERNAL_DEGREE)
        # the {1, 3} block ties between both reference parts; ties go to the first
        scrambled = Partition.from_parts([[1, 3], [2, 4]])
        assert weighted_purity(scrambled, path_partition, w) == pytest.approx(1.0)


@st.composite
def weighted_pairs(draw, max_nodes: int = 40):
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    x = draw(st.lists(st.integers(0, 5), min_size=n, max_size=n))
    y = draw(st.lists(st.integers(0, 5), min_size=n, max_size=n))
    values = draw(st.lists(st.floats(0.0, 10.0), min_size=n, max_size=n))
    values[draw(st.integers(0, n - 1))] += 1.0
    px = Partition.from_assignment(enumerate(x))
    py = Partition.from_assignment(enumerate(y))
    return px, py, NodeWeights(px.nodes, np.array(values), WeightScheme.INTERNAL_DEGREE)


@settings(max_examples=200, deadline=None)
@given(weighted_pairs(), st.floats(1e-3, 1e3))
def test_weighted_purity_ignores_weight_scale(case, factor):
    x, y, w = case
    score = weighted_purity(x, y, w)
    assert 0.0 <= score <= 1.0 + 1e-12
    assert weighted_purity(x, y, w.scaled(factor)) == pytest.approx(score, abs=1e-12)
