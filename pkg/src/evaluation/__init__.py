"""
Partition evaluation measures and reports
"""

from .classic_measures import (
    purity,
    inverse_purity,
    f_measure,
    node_purity,
    node_purities,
    newman_fcc,
    nmi,
    rand_index,
    modularity,
)
from .topo_measures import (
    NodeWeights,
    WeightScheme,
    ZeroWeightPolicy,
    node_weights,
    weighted_purity,
    topo_scores,
    topo_f_measure,
    node_contributions,
)
from .evaluate import KNOWN_MEASURES, MeasureReport, PartitionEvaluator

__all__ = [
    'purity',
    'inverse_purity',
    'f_measure',
    'node_purity',
    'node_purities',
    'newman_fcc',
    'nmi',
    'rand_index',
    'modularity',
    'NodeWeights',
    'WeightScheme',
    'ZeroWeightPolicy',
    'node_weights',
    'weighted_purity',
    'topo_scores',
    'topo_f_measure',
    'node_contributions',
    'KNOWN_MEASURES',
    'MeasureReport',
    'PartitionEvaluator',
]
