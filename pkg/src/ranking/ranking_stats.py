"""
Ranking Statistics

Per-network scores of several algorithms are compared with a one-way
ANOVA followed by Tukey's HSD test; algorithms whose mean scores are not
significantly different share a row of the ranking table. A row's rank is
one plus the number of algorithms placed in strictly better rows, so ranks
skip (1, 2, 4, ...) after a shared row.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from src.utils.exceptions import ConfigurationError, InputError

logger = logging.getLogger(__name__)

SCORE_COLUMNS = ['algorithm', 'network', 'score']


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """
    Complete algorithm × network score matrix.

    Attributes:
        algorithms: Algorithm labels (row order)
        networks: Network labels (column order)
        scores: Score of each algorithm on each network
        measure_name: Name of the measure the scores come from
    """

    algorithms: Tuple[str, ...]
    networks: Tuple[str, ...]
    scores: np.ndarray
    measure_name: str = "score"

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.shape != (len(self.algorithms), len(self.networks)):
            raise InputError(
                f"score matrix shape {scores.shape} does not match "
                f"{len(self.algorithms)} algorithms × {len(self.networks)} networks"
            )
        if len(set(self.algorithms)) != len(self.algorithms):
            raise InputError("duplicate algorithm label")
        if not np.all(np.isfinite(scores)):
            raise InputError("scores must be finite numbers")
        scores.setflags(write=False)
        object.__setattr__(self, 'scores', scores)

    @classmethod
    def from_frame(
        cls,
        frame: pd.DataFrame,
        measure_name: str = "score",
        source: Optional[str] = None
    ) -> "ScoreMatrix":
        """
        Build a matrix from a long-format frame with columns algorithm, network, score.

        Algorithms keep their order of first appearance; networks are sorted.

        Raises:
            InputError: On a wrong header, non-numeric or duplicate scores,
                or when algorithms were not scored on the same networks
        """
        if list(frame.columns) != SCORE_COLUMNS:
            raise InputError(
                f"expected header 'algorithm,network,score', got '{','.join(map(str, frame.columns))}'",
                source, 1 if source else None
            )

        frame = frame.copy()
        frame['algorithm'] = frame['algorithm'].astype(str)
        frame['network'] = frame['network'].astype(str)
        numeric = pd.to_numeric(frame['score'], errors='coerce')
        bad = numeric.isna() | ~np.isfinite(numeric.fillna(0.0))
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise InputError(
                f"score is not a finite number: {frame['score'].iloc[row]!r}",
                source, row + 2 if source else None
            )
        frame['score'] = numeric.astype(np.float64)

        duplicated = frame.duplicated(['algorithm', 'network'])
        if duplicated.any():
            row = int(np.flatnonzero(duplicated.to_numpy())[0])
            raise InputError(
                f"duplicate score for algorithm {frame['algorithm'].iloc[row]} "
                f"on network {frame['network'].iloc[row]}",
                source, row + 2 if source else None
            )

        algorithms = tuple(pd.unique(frame['algorithm']))
        networks = tuple(sorted(pd.unique(frame['network'])))
        table = frame.pivot(index='algorithm', columns='network', values='score')
        table = table.reindex(index=list(algorithms), columns=list(networks))
        if table.isna().to_numpy().any():
            counts = frame.groupby('algorithm', sort=False).size()
            raise InputError(
                "unbalanced groups: every algorithm needs a score on every network "
                f"(observations per algorithm: {', '.join(f'{a}={c}' for a, c in counts.items())})",
                source
            )
        return cls(algorithms, networks, table.to_numpy(dtype=np.float64), measure_name)

    @classmethod
    def from_csv(cls, path: Union[str, Path], measure_name: Optional[str] = None) -> "ScoreMatrix":
        """
        Load a CSV file with header ``algorithm,network,score``.

        Raises:
            InputError: If the file cannot be read or is malformed
        """
        path = Path(path)
        try:
            frame = pd.read_csv(path, dtype={'algorithm': str, 'network': str},
                                skipinitialspace=True)
        except OSError as e:
            raise InputError(f"cannot read score file: {e.strerror}", str(path)) from e
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise InputError(f"malformed CSV: {e}", str(path)) from e
        return cls.from_frame(frame, measure_name or path.stem, source=str(path))

    @property
    def group_count(self) -> int:
        return len(self.algorithms)

    @property
    def observations(self) -> int:
        """Observations per algorithm (the matrix is balanced)."""
        return len(self.networks)

    def means(self) -> np.ndarray:
        return self.scores.mean(axis=1)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'algorithm': a, 'network': net, 'score': float(self.scores[i, j])}
            for i, a in enumerate(self.algorithms)
            for j, net in enumerate(self.networks)
        ], columns=SCORE_COLUMNS)

    def to_csv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, index=False, lineterminator="\n", float_format='%.12g')


def _require_inference(m: ScoreMatrix) -> None:
    if m.group_count < 2:
        raise InputError(f"need at least 2 algorithms, got {m.group_count}")
    if m.observations < 2:
        raise InputError(f"need at least 2 networks per algorithm, got {m.observations}")


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"alpha must lie in (0, 1), got {alpha}")


@dataclass(frozen=True)
class AnovaResult:
    """
    One-way ANOVA outcome.

    Equal group means are the "no differences" outcome. F is then 0 with
    p = 1, or None for both when every observation is identical and the
    statistic is undefined.
    """

    f_statistic: Optional[float]
    p_value: Optional[float]
    df_between: int
    df_within: int
    ss_between: float
    ss_within: float

    @property
    def ms_within(self) -> float:
        return self.ss_within / self.df_within

    @property
    def no_differences(self) -> bool:
        return self.ss_between == 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            # JSON has no infinity
            'f_statistic': self.f_statistic if self.f_statistic is None or math.isfinite(self.f_statistic) else "inf",
            'p_value': self.p_value,
            'df_between': self.df_between,
            'df_within': self.df_within,
            'no_differences': self.no_differences,
        }


def one_way_anova(m: ScoreMatrix) -> AnovaResult:
    """
    One-way ANOVA of the algorithms' scores.

    Args:
        m: Balanced score matrix with ≥ 2 algorithms and ≥ 2 networks

    Returns:
        AnovaResult; F is +inf (p = 0) when groups differ but have no
        within-group variance

    Raises:
        InputError: If the matrix is too small for inference
    """
    _require_inference(m)
    k, r = m.scores.shape
    means = m.means()
    grand = means.mean()
    ss_between = float(r * np.sum((means - grand) ** 2))
    ss_within = float(np.sum((m.scores - means[:, None]) ** 2))
    df_between, df_within = k - 1, k * (r - 1)

    if np.all(means == means[0]):
        logger.info(f"ANOVA on {m.measure_name}: all group means identical")
        if ss_within == 0:
            return AnovaResult(None, None, df_between, df_within, 0.0, 0.0)
        return AnovaResult(0.0, 1.0, df_between, df_within, 0.0, ss_within)

    if ss_within == 0:
        f_stat, p_value = math.inf, 0.0
    else:
        f_stat = (ss_between / df_between) / (ss_within / df_within)
        p_value = float(stats.f.sf(f_stat, df_between, df_within))

    logger.info(f"ANOVA on {m.measure_name}: F({df_between},{df_within})={f_stat:.4f}, p={p_value:.4g}")
    return AnovaResult(float(f_stat), p_value, df_between, df_within, ss_between, ss_within)


@dataclass(frozen=True)
class PairComparison:
    """Tukey comparison of two algorithms."""

    first: str
    second: str
    mean_difference: float
    q_statistic: float
    significant: bool


@dataclass(frozen=True)
class TukeyResult:
    """All pairwise Tukey comparisons at one significance level."""

    alpha: float
    q_critical: float
    comparisons: Tuple[PairComparison, ...]
    anova: AnovaResult
    _lookup: Dict[frozenset, bool] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_lookup', {
            frozenset((c.first, c.second)): c.significant for c in self.comparisons
        })

    def is_significant(self, a: str, b: str) -> bool:
        return self._lookup[frozenset((a, b))]

    def significant_pairs(self) -> List[Tuple[str, str]]:
        return [(c.first, c.second) for c in self.comparisons if c.significant]


def studentized_range_critical(alpha: float, k: int, df: int) -> float:
    """Upper-alpha quantile of the studentized range distribution."""
    return float(stats.studentized_range.ppf(1.0 - alpha, k, df))


def tukey_hsd(m: ScoreMatrix, alpha: float = 0.05) -> TukeyResult:
    """
    Tukey's honestly significant difference test on balanced groups.

    A pair is significant when |mean_a − mean_b| / sqrt(MSW / r) exceeds
    the studentized-range critical value q(alpha, k, df_within). With no
    within-group variance q is +inf for every pair whose means differ, so
    such pairs are significant at any alpha.

    Raises:
        ConfigurationError: If alpha is outside (0, 1)
        InputError: If the matrix is too small for inference
    """
    _check_alpha(alpha)
    anova = one_way_anova(m)
    k, r = m.scores.shape
    q_critical = studentized_range_critical(alpha, k, anova.df_within)
    means = m.means()
    standard_error = math.sqrt(anova.ms_within / r)

    comparisons = []
    for i, j in itertools.combinations(range(k), 2):
        difference = float(means[i] - means[j])
        if standard_error > 0:
            q = abs(difference) / standard_error
        else:
            q = math.inf if difference != 0 else 0.0
        comparisons.append(PairComparison(
            m.algorithms[i], m.algorithms[j], difference, q,
            (not anova.no_differences) and q > q_critical
        ))

    result = TukeyResult(alpha, q_critical, tuple(comparisons), anova)
    logger.info(
        f"Tukey HSD on {m.measure_name}: q_crit={q_critical:.4f}, "
        f"{len(result.significant_pairs())} significant pair(s)"
    )
    return result


@dataclass(frozen=True)
class RankRow:
    rank: int
    algorithms: Tuple[str, ...]
    means: Tuple[float, ...]


@dataclass(frozen=True)
class RankTable:
    """Significance-grouped ranking of the algorithms."""

    rows: Tuple[RankRow, ...]
    alpha: float
    measure_name: str
    anova: AnovaResult
    tukey: TukeyResult

    def rank_of(self, algorithm: str) -> int:
        for row in self.rows:
            if algorithm in row.algorithms:
                return row.rank
        raise KeyError(algorithm)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'measure': self.measure_name,
            'alpha': self.alpha,
            'anova': self.anova.to_dict(),
            'q_critical': self.tukey.q_critical,
            'rows': [
                {'rank': row.rank, 'algorithms': list(row.algorithms), 'means': list(row.means)}
                for row in self.rows
            ],
            'significant_pairs': sorted(sorted(pair) for pair in self.tukey.significant_pairs()),
        }

    def to_text(self) -> str:
        frame = pd.DataFrame({
            'rank': [row.rank for row in self.rows],
            'algorithms': [', '.join(row.algorithms) for row in self.rows],
            'mean': [', '.join(f"{v:.4f}" for v in row.means) for row in self.rows],
        })
        header = f"Ranking by {self.measure_name} (alpha={self.alpha:g})"
        return header + "\n" + frame.to_string(index=False) + "\n"


def rank_table(m: ScoreMatrix, alpha: float = 0.05) -> RankTable:
    """
    Group algorithms into ranked rows.

    Algorithms are sorted by mean score (descending, ties by name) and
    adjacent algorithms share a row unless Tukey's test separates them.
    Algorithms with constant scores and different means always land in
    separate rows, whatever alpha.

    Args:
        m: Score matrix
        alpha: Significance level

    Returns:
        RankTable
    """
    tukey = tukey_hsd(m, alpha)
    anova = tukey.anova
    means = dict(zip(m.algorithms, m.means().tolist()))
    ordered = sorted(m.algorithms, key=lambda a: (-means[a], a))

    groups: List[List[str]] = [[ordered[0]]]
    for previous, current in zip(ordered, ordered[1:]):
        if tukey.is_significant(previous, current):
            groups.append([current])
        else:
            groups[-1].append(current)

    rows = []
    placed = 0
    for group in groups:
        rows.append(RankRow(placed + 1, tuple(group), tuple(means[a] for a in group)))
        placed += len(group)

    logger.info(f"Ranked {m.group_count} algorithms into {len(rows)} row(s)")
    return RankTable(tuple(rows), alpha, m.measure_name, anova, tukey)


def rank_scores(
    scores: Union[ScoreMatrix, pd.DataFrame],
    alpha: float = 0.05,
    measure_name: str = "score"
) -> RankTable:
    """Rank a score matrix or a long-format score frame."""
    if isinstance(scores, pd.DataFrame):
        scores = ScoreMatrix.from_frame(scores, measure_name)
    return rank_table(scores, alpha)
