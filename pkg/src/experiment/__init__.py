"""
Perturbation experiment: synthetic algorithms scored and ranked on benchmarks
"""

from .perturbation import (
    ExperimentConfig,
    ExperimentResult,
    perturb_partition,
    random_perturbation,
    run_perturbation_experiment,
    score_matrix,
    weighted_perturbation,
)

__all__ = [
    'ExperimentConfig',
    'ExperimentResult',
    'perturb_partition',
    'random_perturbation',
    'run_perturbation_experiment',
    'score_matrix',
    'weighted_perturbation',
]
