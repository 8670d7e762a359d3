"""
Significance-grouped ranking of algorithms (one-way ANOVA + Tukey HSD)
"""

from .ranking_stats import (
    AnovaResult,
    PairComparison,
    RankRow,
    RankTable,
    ScoreMatrix,
    TukeyResult,
    one_way_anova,
    rank_scores,
    rank_table,
    tukey_hsd,
)

__all__ = [
    'AnovaResult',
    'PairComparison',
    'RankRow',
    'RankTable',
    'ScoreMatrix',
    'TukeyResult',
    'one_way_anova',
    'rank_scores',
    'rank_table',
    'tukey_hsd',
]
