"""
Perturbation Experiment

Desk-scale version of the evaluation protocol: generate several benchmark
networks, derive synthetic "algorithms" by moving a share of the nodes of
the reference partition to other communities, score them with the classic
F-measure and the topological F′, and rank them with ANOVA + Tukey.

A second, targeted run moves the same number of highest-weight and
lowest-weight nodes; F′ must penalize the former more on every network.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.evaluation.evaluate import PartitionEvaluator
from src.evaluation.topo_measures import NodeWeights, WeightScheme
from src.generation.benchmark_generator import (
    LfrConfig,
    PlantedConfig,
    generate_lfr,
    generate_planted,
)
from src.graph.graph_model import Graph
from src.partition.partition_model import Partition
from src.ranking.ranking_stats import RankTable, ScoreMatrix, rank_table
from src.utils.config_loader import DEFAULT_CONFIG
from src.utils.exceptions import ConfigurationError, DegenerateComputationError

logger = logging.getLogger(__name__)

EXPERIMENT_MEASURES = ('f_measure', 'topo_f_measure')
GENERATORS = ('lfr', 'planted')


def _count(fraction: float, n: int) -> int:
    """round(fraction·n) with halves rounded up."""
    return int(math.floor(fraction * n + 0.5))


def perturb_partition(
    p: Partition,
    nodes: Iterable[str],
    rng: np.random.Generator
) -> Partition:
    """
    Move every listed node to a uniformly chosen different community.

    Raises:
        DegenerateComputationError: If the partition has a single community
        UnknownNodeError: If a node is not in the partition
    """
    nodes = list(nodes)
    if not nodes:
        return p
    if p.part_count < 2:
        raise DegenerateComputationError("cannot move nodes out of a single-community partition")

    changes = {}
    for node in nodes:
        current = p.community_of(node)
        # uniform over the other part_count - 1 communities
        target = int(rng.integers(p.part_count - 1))
        if target >= current:
            target += 1
        changes[node] = p.community_labels[target]
    return p.moved(changes)


def random_perturbation(p: Partition, fraction: float, rng: np.random.Generator) -> Partition:
    """Move round(fraction·n) uniformly chosen nodes to other communities."""
    if not 0.0 <= fraction <= 1.0:
        raise ConfigurationError(f"perturbation fraction must lie in [0, 1], got {fraction}")
    count = _count(fraction, p.n)
    chosen = np.sort(rng.choice(p.n, size=count, replace=False))
    return perturb_partition(p, [p.nodes[i] for i in chosen], rng)


def weighted_perturbation(
    p: Partition,
    w: NodeWeights,
    fraction: float,
    rng: np.random.Generator,
    highest: bool = True
) -> Partition:
    """
    Move the round(fraction·n) nodes of highest (or lowest) weight.

    Ties are broken by the partition's node order.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ConfigurationError(f"perturbation fraction must lie in [0, 1], got {fraction}")
    weights = w.aligned(p.nodes)
    keys = -weights if highest else weights
    order = np.lexsort((np.arange(p.n), keys))
    count = _count(fraction, p.n)
    return perturb_partition(p, [p.nodes[i] for i in order[:count]], rng)


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of the perturbation experiment."""

    networks: int = 5
    generator: str = 'lfr'
    nodes: int = 1000
    mu: float = 0.3
    fractions: Tuple[float, ...] = (0.0, 0.05, 0.2)
    targeted_fraction: float = 0.05
    seed: int = 2012
    weight_scheme: WeightScheme = WeightScheme.INTERNAL_DEGREE
    alpha: float = 0.05
    lfr: Dict[str, Any] = field(default_factory=dict)
    planted: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.networks < 2:
            raise ConfigurationError("the experiment needs at least 2 networks")
        if self.generator not in GENERATORS:
            raise ConfigurationError(
                f"unknown generator '{self.generator}' (expected one of {', '.join(GENERATORS)})"
            )
        if not self.fractions or len(set(self.fractions)) != len(self.fractions):
            raise ConfigurationError("fractions must be a non-empty list of distinct values")
        for fraction in (*self.fractions, self.targeted_fraction):
            if not 0.0 <= fraction <= 1.0:
                raise ConfigurationError(f"perturbation fraction must lie in [0, 1], got {fraction}")
        object.__setattr__(self, 'fractions', tuple(float(f) for f in self.fractions))
        object.__setattr__(self, 'weight_scheme', WeightScheme(self.weight_scheme))

    @classmethod
    def from_config(cls, config: Dict[str, Any], **overrides) -> "ExperimentConfig":
        """Build from the loaded configuration, with explicit overrides winning."""
        section = {**DEFAULT_CONFIG['experiment'], **config.get('experiment', {})}
        generation = config.get('generation', DEFAULT_CONFIG['generation'])
        values = {
            'networks': int(section['networks']),
            'generator': section['generator'],
            'nodes': int(section['nodes']),
            'mu': float(section['mu']),
            'fractions': tuple(section['fractions']),
            'targeted_fraction': float(section['targeted_fraction']),
            'seed': int(section['seed']),
            'weight_scheme': config.get('evaluation', {}).get('weight_scheme', 'internal-degree'),
            'alpha': float(config.get('ranking', {}).get('alpha', 0.05)),
            'lfr': dict(generation.get('lfr', {})),
            'planted': dict(generation.get('planted', {})),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def network_config(self, seed: int):
        """Generator configuration of one network."""
        if self.generator == 'lfr':
            params = {key: value for key, value in self.lfr.items() if key not in ('nodes', 'mu', 'seed')}
            return LfrConfig(n=self.nodes, mu=self.mu, seed=seed, **params)
        params = dict(self.planted)
        return PlantedConfig(
            n=self.nodes,
            c=int(params.get('communities', 10)),
            mu=self.mu,
            avg_degree=float(params.get('avg_degree', 20.0)),
            seed=seed,
        )


def algorithm_label(fraction: float) -> str:
    return f"moved-{fraction * 100:g}%"


@dataclass
class ExperimentResult:
    """
    Scores of the perturbation experiment.

    Attributes:
        scores: Long table with columns algorithm, network, measure, score
        targeted: One row per network with the F′ of the highest- and
            lowest-weight perturbations and their gap
        config: Configuration that produced the result
    """

    scores: pd.DataFrame
    targeted: pd.DataFrame
    config: ExperimentConfig

    def measures(self) -> List[str]:
        return list(pd.unique(self.scores['measure']))

    def rank_tables(self, alpha: Optional[float] = None) -> Dict[str, RankTable]:
        alpha = self.config.alpha if alpha is None else alpha
        return {measure: rank_table(score_matrix(self, measure), alpha) for measure in self.measures()}

    @property
    def targeted_separation(self) -> bool:
        """True when the high-weight perturbation scores strictly lower on every network."""
        return bool((self.targeted['high_weight'] < self.targeted['low_weight']).all())


def score_matrix(result: ExperimentResult, measure: str) -> ScoreMatrix:
    """
    Score matrix of one measure, ready for ranking.

    Raises:
        ConfigurationError: If the measure was not recorded
    """
    rows = result.scores[result.scores['measure'] == measure]
    if rows.empty:
        raise ConfigurationError(f"measure '{measure}' not in the experiment result")
    frame = rows[['algorithm', 'network', 'score']].reset_index(drop=True)
    return ScoreMatrix.from_frame(frame, measure)


def _generate(cfg: ExperimentConfig, seed: int) -> Tuple[Graph, Partition]:
    network_cfg = cfg.network_config(seed)
    if cfg.generator == 'lfr':
        return generate_lfr(network_cfg)
    return generate_planted(network_cfg)


def run_perturbation_experiment(
    cfg: ExperimentConfig,
    progress: bool = False
) -> ExperimentResult:
    """
    Run the perturbation experiment.

    Every network gets its own seed derived from ``cfg.seed``, used for
    both the generator and the perturbations, so the result is
    deterministic per configuration.

    Args:
        cfg: Experiment configuration
        progress: Show a progress bar on stderr

    Returns:
        ExperimentResult
    """
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.networks)
    records: List[Dict[str, Any]] = []
    targeted: List[Dict[str, Any]] = []

    for index, child in enumerate(tqdm(children, desc="networks", disable=not progress)):
        network = f"net{index + 1}"
        network_seed = int(child.generate_state(1, dtype=np.uint64)[0])
        graph, reference = _generate(cfg, network_seed)
        rng = np.random.Generator(np.random.PCG64(child))

        evaluator = PartitionEvaluator(
            graph, reference, measures=list(EXPERIMENT_MEASURES), weight_scheme=cfg.weight_scheme
        )
        for fraction in cfg.fractions:
            predicted = random_perturbation(reference, fraction, rng)
            report = evaluator.evaluate(predicted, algorithm_label(fraction)).report
            for measure in EXPERIMENT_MEASURES:
                records.append({
                    'algorithm': algorithm_label(fraction),
                    'network': network,
                    'measure': measure,
                    'score': getattr(report, measure),
                })

        high = weighted_perturbation(reference, evaluator.weights, cfg.targeted_fraction, rng, highest=True)
        low = weighted_perturbation(reference, evaluator.weights, cfg.targeted_fraction, rng, highest=False)
        high_f = evaluator.evaluate(high, 'high-weight').report.topo_f_measure
        low_f = evaluator.evaluate(low, 'low-weight').report.topo_f_measure
        targeted.append({
            'network': network,
            'high_weight': high_f,
            'low_weight': low_f,
            'gap': low_f - high_f,
        })
        logger.info(
            f"{network}: n={graph.node_count}, m={graph.edge_count}, "
            f"targeted F' high={high_f:.4f} low={low_f:.4f}"
        )

    scores = pd.DataFrame(records, columns=['algorithm', 'network', 'measure', 'score'])
    return ExperimentResult(scores, pd.DataFrame(targeted), cfg)
