"""
Benchmark generation: planted-partition and LFR-lite graphs
"""

from .benchmark_generator import (
    LfrConfig,
    PlantedConfig,
    empirical_mixing,
    generate_lfr,
    generate_planted,
    make_rng,
    write_benchmark,
)

__all__ = [
    'LfrConfig',
    'PlantedConfig',
    'empirical_mixing',
    'generate_lfr',
    'generate_planted',
    'make_rng',
    'write_benchmark',
]
