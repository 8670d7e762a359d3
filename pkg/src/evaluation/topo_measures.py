"""
Topological Measures

Purity and F-measure in which every node's contribution is weighted by
its topological importance. The default weight of node u is its
internal degree in the reference partition divided by the graph's
maximal degree, i.e. normalized degree times embeddedness.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Hashable, Sequence, Tuple

import numpy as np
import pandas as pd

from src.evaluation.classic_measures import harmonic_mean, node_purities
from src.graph.graph_model import Graph
from src.partition.partition_model import Partition, require_same_nodes
from src.utils.exceptions import DegenerateComputationError, PartitionMismatchError, UnknownNodeError

logger = logging.getLogger(__name__)


class WeightScheme(str, Enum):
    """How node importance is derived from the topology."""

    INTERNAL_DEGREE = 'internal-degree'
    UNIFORM = 'uniform'
    STRENGTH = 'strength'
    DEGREE = 'degree'


class ZeroWeightPolicy(str, Enum):
    """What to do when all node weights are zero."""

    ERROR = 'error'
    UNIFORM = 'uniform'


@dataclass(frozen=True, eq=False)
class NodeWeights:
    """
    Per-node importance values.

    Attributes:
        nodes: Node tokens
        values: Weight of each node (aligned with ``nodes``), all >= 0
        scheme: Scheme that produced the weights
    """

    nodes: Tuple[str, ...]
    values: np.ndarray
    scheme: WeightScheme
    _position: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if len(values) != len(self.nodes):
            raise ValueError("one weight per node is required")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("node weights must be finite and non-negative")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'scheme', WeightScheme(self.scheme))
        object.__setattr__(self, '_position', {node: i for i, node in enumerate(self.nodes)})

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def weight(self, node: Hashable) -> float:
        token = str(node)
        if token not in self._position:
            raise UnknownNodeError(f"unknown node: {token}")
        return float(self.values[self._position[token]])

    def aligned(self, nodes: Sequence[Hashable]) -> np.ndarray:
        """
        Weights in the order of ``nodes``.

        Raises:
            PartitionMismatchError: If ``nodes`` is not exactly the weighted node set
        """
        tokens = [str(node) for node in nodes]
        if len(tokens) != len(self.nodes):
            raise PartitionMismatchError("weights and partition cover different node sets")
        try:
            return self.values[[self._position[t] for t in tokens]]
        except KeyError as e:
            raise PartitionMismatchError(f"no weight for node {e.args[0]}") from None

    def scaled(self, factor: float) -> "NodeWeights":
        return NodeWeights(self.nodes, self.values * factor, self.scheme)


def uniform_weights(nodes: Sequence[Hashable]) -> NodeWeights:
    tokens = tuple(str(node) for node in nodes)
    n = len(tokens)
    values = np.full(n, 1.0 / n) if n else np.zeros(0)
    return NodeWeights(tokens, values, WeightScheme.UNIFORM)


def node_weights(
    g: Graph,
    reference: Partition,
    scheme: WeightScheme = WeightScheme.INTERNAL_DEGREE
) -> NodeWeights:
    """
    Compute node weights from the graph and the reference partition.

    Schemes:
        internal-degree: d_int(u) / max_v d(v)
        uniform: 1 / n
        strength: internal strength of u / max_v strength(v)
        degree: d(u) / max_v d(v)

    Args:
        g: Graph
        reference: Partition whose communities define internal links
        scheme: Weight scheme

    Returns:
        NodeWeights over the graph's nodes

    Raises:
        PartitionMismatchError: If the reference does not cover the graph's nodes
        DegenerateComputationError: If the graph has no edges and the
            scheme is not uniform
    """
    scheme = WeightScheme(scheme)
    # validates coverage for every scheme
    reference.membership(g.nodes)

    if scheme is WeightScheme.UNIFORM:
        return uniform_weights(g.nodes)

    if g.edge_count == 0:
        raise DegenerateComputationError(
            f"'{scheme.value}' weights need at least one edge"
        )

    if scheme is WeightScheme.INTERNAL_DEGREE:
        values = g.internal_degrees(reference) / g.max_degree()
    elif scheme is WeightScheme.DEGREE:
        values = g.degrees() / g.max_degree()
    else:
        values = g.internal_strengths(reference) / g.strengths().max()

    logger.info(
        f"Computed '{scheme.value}' weights for {g.node_count} nodes "
        f"(total {values.sum():.4f})"
    )
    return NodeWeights(g.nodes, values, scheme)


def weighted_purity(x: Partition, y: Partition, w: NodeWeights) -> float:
    """
    Weighted purity Pur'(X, Y).

    Each node's purity is weighted by w_u / Σ_v w_v instead of 1/n, so
    errors on important nodes cost more.

    Args:
        x: Partition whose parts are scored
        y: Partition the parts are matched against
        w: Node weights over the same node set

    Returns:
        Weighted purity in [0, 1]

    Raises:
        PartitionMismatchError: If node sets differ
        DegenerateComputationError: If the total weight is 0
    """
    require_same_nodes(x, y)
    total = w.total
    if total <= 0:
        raise DegenerateComputationError(
            "total node weight is 0: no node has an internal link in the reference"
        )
    weights = w.aligned(x.nodes)
    score = float(np.dot(weights, node_purities(x, y)) / total)
    return min(1.0, score)


@dataclass(frozen=True)
class TopoScores:
    """Both weighted purities, F′, and the weights' provenance."""

    purity: float
    inverse_purity: float
    f_measure: float
    scheme: WeightScheme
    fell_back_to_uniform: bool = False


def resolve_weights(
    g: Graph,
    reference: Partition,
    scheme: WeightScheme = WeightScheme.INTERNAL_DEGREE,
    on_zero_weights: ZeroWeightPolicy = ZeroWeightPolicy.ERROR
) -> Tuple[NodeWeights, bool]:
    """
    Weights for a reference partition under a zero-weight policy.

    Returns:
        (weights, fell_back) where ``fell_back`` tells whether uniform
        weights replaced an all-zero weighting

    Raises:
        DegenerateComputationError: On all-zero weights under the error policy
    """
    policy = ZeroWeightPolicy(on_zero_weights)
    try:
        weights = node_weights(g, reference, scheme)
    except DegenerateComputationError:
        if policy is ZeroWeightPolicy.ERROR:
            raise
        weights = None

    if weights is None or weights.total <= 0:
        if policy is ZeroWeightPolicy.ERROR:
            raise DegenerateComputationError(
                "total node weight is 0: no node has an internal link in the reference"
            )
        logger.warning(
            f"All '{WeightScheme(scheme).value}' weights are zero, falling back to uniform weights"
        )
        return uniform_weights(g.nodes), True
    return weights, False


def topo_scores(
    x: Partition,
    y: Partition,
    g: Graph,
    scheme: WeightScheme = WeightScheme.INTERNAL_DEGREE,
    on_zero_weights: ZeroWeightPolicy = ZeroWeightPolicy.ERROR,
    weights: NodeWeights = None
) -> TopoScores:
    """
    Weighted purity in both directions and their harmonic mean.

    Weights are always computed against the reference ``y``, so the same
    w_u is used for Pur'(X, Y) and Pur'(Y, X).

    Args:
        x: Estimated partition
        y: Reference partition
        g: Graph
        scheme: Weight scheme
        on_zero_weights: Policy for an all-zero weighting
        weights: Precomputed weights (skips the computation)

    Returns:
        TopoScores
    """
    require_same_nodes(x, y)
    fell_back = False
    if weights is None:
        weights, fell_back = resolve_weights(g, y, scheme, on_zero_weights)
    p = weighted_purity(x, y, weights)
    q = weighted_purity(y, x, weights)
    return TopoScores(
        purity=p,
        inverse_purity=q,
        f_measure=harmonic_mean(min(p, q), max(p, q)),
        scheme=weights.scheme,
        fell_back_to_uniform=fell_back,
    )


def topo_f_measure(
    x: Partition,
    y: Partition,
    g: Graph,
    scheme: WeightScheme = WeightScheme.INTERNAL_DEGREE
) -> float:
    """
    Topological F-measure F′(X, Y).

    Harmonic mean of Pur'(X, Y) and Pur'(Y, X) with weights computed
    against the reference Y; 0 when both weighted purities are 0.
    """
    return topo_scores(x, y, g, scheme).f_measure


def node_contributions(x: Partition, y: Partition, w: NodeWeights) -> pd.DataFrame:
    """
    Per-node breakdown of Pur'(X, Y).

    Columns: node, community, weight, share (w_u / Σw), purity, lost
    (share × (1 − purity)). The ``lost`` column sums to 1 − Pur'(X, Y).

    Raises:
        DegenerateComputationError: If the total weight is 0
    """
    require_same_nodes(x, y)
    total = w.total
    if total <= 0:
        raise DegenerateComputationError("total node weight is 0")
    weights = w.aligned(x.nodes)
    purities = node_purities(x, y)
    share = weights / total
    return pd.DataFrame({
        'node': list(x.nodes),
        'community': [x.community_labels[c] for c in x.community_ids],
        'weight': weights,
        'share': share,
        'purity': purities,
        'lost': share * (1 - purities),
    })
