"""
Classic Partition Measures

External validity measures comparing an estimated partition with a
reference one (purity family, F-measure, Newman's correctly-classified
fraction, NMI, Rand index) and the reference-free modularity.
"""

import logging
from typing import Hashable

import numpy as np
from scipy.stats import entropy

from src.graph.graph_model import Graph
from src.partition.partition_model import Partition, contingency
from src.utils.exceptions import UndefinedMeasureError

logger = logging.getLogger(__name__)


def purity(x: Partition, y: Partition) -> float:
    """
    Purity of partition X with respect to partition Y.

    Each part x_i contributes the share of its largest overlap with a
    part of Y, weighted by its prevalence |x_i|/n. ``purity(y, x)`` is
    the inverse purity.

    Args:
        x: Partition whose parts are scored
        y: Partition the parts are matched against

    Returns:
        Purity in [0, 1]

    Raises:
        PartitionMismatchError: If the node sets differ
    """
    table = contingency(x, y)
    if table.n == 0:
        return 1.0
    # Σ_i |x_i|/n · max_j |x_i ∩ y_j|/|x_i| with the |x_i| factors cancelled
    return float(table.counts.max(axis=1).sum() / table.n)


def inverse_purity(x: Partition, y: Partition) -> float:
    return purity(y, x)


def harmonic_mean(p: float, q: float) -> float:
    """Harmonic mean of two scores, 0 when both are 0."""
    if p == q:
        return float(p)
    return 2.0 * p * q / (p + q)


def f_measure(x: Partition, y: Partition) -> float:
    """Harmonic mean of purity and inverse purity; symmetric in x and y."""
    p = purity(x, y)
    q = purity(y, x)
    # order the operands so that f_measure(x, y) == f_measure(y, x) bit for bit
    return harmonic_mean(min(p, q), max(p, q))


def node_purities(x: Partition, y: Partition) -> np.ndarray:
    """
    Node purity of every node, aligned with ``x.nodes``.

    A node u ∈ x_α, u ∈ y_β is pure when y_β is the part of Y with the
    largest overlap with x_α. Ties go to the lowest canonical index.
    """
    table = contingency(x, y)
    majority = np.argmax(table.counts, axis=1)
    return (majority[x.community_ids] == y.membership(x.nodes)).astype(np.int64)


def node_purity(u: Hashable, x: Partition, y: Partition) -> int:
    """
    Purity of a single node, 0 or 1.

    Raises:
        UnknownNodeError: If the node is not covered by x
    """
    alpha = x.community_of(u)
    beta = y.community_of(u)
    table = contingency(x, y)
    return int(np.argmax(table.counts[alpha]) == beta)


def newman_fcc(x_estimated: Partition, y_reference: Partition) -> float:
    """
    Newman's fraction of correctly classified nodes.

    Inverse purity with a penalty: when one estimated community is the
    majority in two or more reference communities, all nodes of those
    reference communities count as misclassified.

    Args:
        x_estimated: Estimated partition
        y_reference: Reference partition

    Returns:
        Fraction in [0, 1], never above the inverse purity
    """
    table = contingency(x_estimated, y_reference)
    if table.n == 0:
        return 1.0
    counts = table.counts
    majority = np.argmax(counts, axis=0)
    claims = np.bincount(majority, minlength=counts.shape[0])
    columns = np.arange(counts.shape[1])
    kept = claims[majority] == 1
    correct = counts[majority[kept], columns[kept]].sum()
    return float(correct / table.n)


def nmi(x: Partition, y: Partition) -> float:
    """
    Normalized mutual information, arithmetic-mean normalization 2I/(H_X+H_Y).

    Returns 1 when both partitions have zero entropy (each is a single part).
    """
    table = contingency(x, y)
    n = table.n
    h_x = entropy(table.row_sums)
    h_y = entropy(table.col_sums)
    if h_x + h_y == 0:
        return 1.0

    joint = table.counts / n
    p_x = table.row_sums / n
    p_y = table.col_sums / n
    nz = joint > 0
    outer = np.outer(p_x, p_y)
    mutual = float(np.sum(joint[nz] * np.log(joint[nz] / outer[nz])))
    return float(min(1.0, max(0.0, 2.0 * mutual / (h_x + h_y))))


def _pairs(values) -> int:
    values = np.asarray(values, dtype=np.int64)
    return int(np.sum(values * (values - 1) // 2))


def rand_index(x: Partition, y: Partition) -> float:
    """
    Plain (unadjusted) Rand index: share of node pairs on which both partitions agree.

    Raises:
        UndefinedMeasureError: If fewer than two nodes are partitioned
    """
    table = contingency(x, y)
    n = table.n
    if n < 2:
        raise UndefinedMeasureError("rand index needs at least 2 nodes")
    total = n * (n - 1) // 2
    together_both = _pairs(table.counts.ravel())
    together_x = _pairs(table.row_sums)
    together_y = _pairs(table.col_sums)
    agreements = total + 2 * together_both - together_x - together_y
    return agreements / total


def modularity(g: Graph, p: Partition) -> float:
    """
    Newman-Girvan modularity Q = Σ_c (e_cc − a_c²).

    Edge weights replace edge counts on weighted graphs.

    Raises:
        UndefinedMeasureError: If the graph has no edges
        PartitionMismatchError: If p does not cover the graph's nodes
    """
    if g.edge_count == 0:
        raise UndefinedMeasureError("modularity of an edgeless graph")

    membership = p.membership(g.nodes)
    communities = p.part_count
    total = g.total_weight
    inside = membership[g.sources] == membership[g.targets]
    internal = np.bincount(membership[g.sources][inside], weights=g.weights[inside],
                           minlength=communities)
    ends = np.bincount(membership, weights=g.strengths(), minlength=communities)
    q = np.sum(internal / total - (ends / (2.0 * total)) ** 2)
    logger.debug(f"Modularity over {communities} communities: {q:.6f}")
    return float(q)
