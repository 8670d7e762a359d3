"""
Partition Evaluation Module

Evaluates one or more predicted partitions against a reference partition
on a graph, collecting classic and topological measures into reports that
serialize deterministically to JSON or CSV.
"""

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src import __tool__, __version__
from src.evaluation import classic_measures as cm
from src.evaluation.topo_measures import (
    NodeWeights,
    WeightScheme,
    ZeroWeightPolicy,
    node_contributions,
    resolve_weights,
    weighted_purity,
)
from src.graph.graph_model import Graph
from src.partition.partition_model import Partition, require_same_nodes
from src.utils.exceptions import ConfigurationError, UndefinedMeasureError

logger = logging.getLogger(__name__)

KNOWN_MEASURES = (
    'purity',
    'inverse_purity',
    'f_measure',
    'newman_fcc',
    'nmi',
    'rand',
    'modularity',
    'topo_purity',
    'topo_inverse_purity',
    'topo_f_measure',
)

TOPO_MEASURES = ('topo_purity', 'topo_inverse_purity', 'topo_f_measure')


@dataclass
class MeasureReport:
    """
    Scores of one predicted partition against the reference.

    Fields left at None were not requested. Field names are part of the
    JSON report contract.
    """

    purity: Optional[float] = None
    inverse_purity: Optional[float] = None
    f_measure: Optional[float] = None
    newman_fcc: Optional[float] = None
    nmi: Optional[float] = None
    rand: Optional[float] = None
    modularity_reference: Optional[float] = None
    modularity_predicted: Optional[float] = None
    topo_purity: Optional[float] = None
    topo_inverse_purity: Optional[float] = None
    topo_f_measure: Optional[float] = None
    weight_scheme: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {key: value for key, value in self.__dict__.items() if value is not None}


@dataclass
class EvaluationResult:
    """Outcome of evaluating one predicted partition."""

    label: str
    report: MeasureReport
    errors: Dict[str, str] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    contributions: Optional[pd.DataFrame] = None


def parse_measures(selection: Union[str, Sequence[str], None]) -> List[str]:
    """
    Normalize a measure selection.

    Args:
        selection: Comma separated string, list of names, or None for all

    Returns:
        Measure names in canonical order

    Raises:
        ConfigurationError: On an unknown measure name
    """
    if selection is None:
        return list(KNOWN_MEASURES)
    if isinstance(selection, str):
        selection = [part for part in selection.split(',')]
    names = {name.strip() for name in selection if name.strip()}
    unknown = sorted(names - set(KNOWN_MEASURES))
    if unknown:
        raise ConfigurationError(
            f"unknown measure(s): {', '.join(unknown)} "
            f"(known: {', '.join(KNOWN_MEASURES)})"
        )
    if not names:
        raise ConfigurationError("no measure selected")
    return [name for name in KNOWN_MEASURES if name in names]


class PartitionEvaluator:
    """
    Scores predicted partitions against a fixed reference on a fixed graph.

    Node weights for the topological measures are computed once, against
    the reference, and shared by every evaluation. Instances are safe to
    use from several threads.
    """

    def __init__(
        self,
        graph: Graph,
        reference: Partition,
        measures: Optional[Sequence[str]] = None,
        weight_scheme: Union[str, WeightScheme] = WeightScheme.INTERNAL_DEGREE,
        on_zero_weights: Union[str, ZeroWeightPolicy] = ZeroWeightPolicy.ERROR,
        with_contributions: bool = False
    ):
        """
        Initialize the evaluator.

        Args:
            graph: Graph the partitions live on
            reference: Reference partition (must cover the graph's nodes)
            measures: Measure names, None for all
            weight_scheme: Node weight scheme for the topological measures
            on_zero_weights: Policy when all weights are zero
            with_contributions: Also compute the per-node contribution table

        Raises:
            PartitionMismatchError: If the reference does not cover the graph
            DegenerateComputationError: If topological measures are requested
                and the weights are all zero under the error policy
        """
        self.graph = graph
        self.reference = reference
        self.measures = parse_measures(measures)
        self.weight_scheme = WeightScheme(weight_scheme)
        self.on_zero_weights = ZeroWeightPolicy(on_zero_weights)
        self.with_contributions = with_contributions
        self.warnings: List[str] = []

        reference.membership(graph.nodes)

        self.weights: Optional[NodeWeights] = None
        if with_contributions or any(m in TOPO_MEASURES for m in self.measures):
            self.weights, fell_back = resolve_weights(
                graph, reference, self.weight_scheme, self.on_zero_weights
            )
            if fell_back:
                self.warnings.append(
                    f"all '{self.weight_scheme.value}' weights are zero; uniform weights used"
                )

        self._reference_modularity: Optional[float] = None
        self._reference_modularity_error: Optional[str] = None
        if 'modularity' in self.measures:
            try:
                self._reference_modularity = cm.modularity(graph, reference)
            except UndefinedMeasureError as e:
                self._reference_modularity_error = str(e)

    def evaluate(self, predicted: Partition, label: str = "predicted") -> EvaluationResult:
        """
        Compute every requested measure for one predicted partition.

        Measures that are undefined for this input are reported as error
        entries instead of aborting the evaluation.

        Args:
            predicted: Predicted partition
            label: Name used in the report

        Returns:
            EvaluationResult

        Raises:
            PartitionMismatchError: If the node sets differ
        """
        require_same_nodes(predicted, self.reference)
        report = MeasureReport()
        errors: Dict[str, str] = {}
        ref = self.reference

        scores: Dict[str, Callable[[], float]] = {
            'purity': lambda: cm.purity(predicted, ref),
            'inverse_purity': lambda: cm.purity(ref, predicted),
            'f_measure': lambda: cm.f_measure(predicted, ref),
            'newman_fcc': lambda: cm.newman_fcc(predicted, ref),
            'nmi': lambda: cm.nmi(predicted, ref),
            'rand': lambda: cm.rand_index(predicted, ref),
            'topo_purity': lambda: weighted_purity(predicted, ref, self.weights),
            'topo_inverse_purity': lambda: weighted_purity(ref, predicted, self.weights),
            'topo_f_measure': lambda: self._topo_f(predicted),
        }

        for name in self.measures:
            try:
                if name == 'modularity':
                    self._modularity(report, predicted)
                else:
                    setattr(report, name, scores[name]())
            except UndefinedMeasureError as e:
                errors[name] = str(e)

        if any(m in TOPO_MEASURES for m in self.measures):
            report.weight_scheme = self.weights.scheme.value

        contributions = None
        if self.with_contributions:
            contributions = node_contributions(predicted, ref, self.weights)

        logger.info(f"Evaluated {label}: {len(self.measures) - len(errors)} measures computed")
        return EvaluationResult(label, report, errors, list(self.warnings), contributions)

    def evaluate_many(
        self,
        predicted: Sequence[Partition],
        labels: Sequence[str],
        workers: int = 1
    ) -> List[EvaluationResult]:
        """
        Evaluate several partitions, concurrently when ``workers`` > 1.

        Results follow the input order regardless of completion order.
        """
        if workers <= 1 or len(predicted) <= 1:
            return [self.evaluate(p, label) for p, label in zip(predicted, labels)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self.evaluate, predicted, labels))

    def _modularity(self, report: MeasureReport, predicted: Partition) -> None:
        if self._reference_modularity_error is not None:
            raise UndefinedMeasureError(self._reference_modularity_error)
        report.modularity_reference = self._reference_modularity
        report.modularity_predicted = cm.modularity(self.graph, predicted)

    def _topo_f(self, predicted: Partition) -> float:
        p = weighted_purity(predicted, self.reference, self.weights)
        q = weighted_purity(self.reference, predicted, self.weights)
        return cm.harmonic_mean(min(p, q), max(p, q))


# Report serialization ------------------------------------------------------

def round_float(value: float, digits: int = 12) -> float:
    """Round to ``digits`` significant digits; the JSON writer then emits the shortest repr."""
    if value is None or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def round_floats(obj: Any, digits: int) -> Any:
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        return round_float(obj, digits)
    if isinstance(obj, dict):
        return {key: round_floats(value, digits) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(value, digits) for value in obj]
    return obj


def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 hex digest of a file."""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def build_report(
    results: Sequence[EvaluationResult],
    inputs: Dict[str, Any],
    measures: Sequence[str],
    digits: int = 12
) -> Dict[str, Any]:
    """
    Assemble the full evaluation report.

    Args:
        results: Per-partition results, in command-line order
        inputs: Path and digest entries of the graph, reference and predicted files
        measures: Requested measure names
        digits: Significant digits kept for floats

    Returns:
        JSON-ready dictionary
    """
    warnings: List[str] = []
    entries = []
    for result in results:
        for warning in result.warnings:
            if warning not in warnings:
                warnings.append(warning)
        entry: Dict[str, Any] = {
            'predicted': result.label,
            'measures': result.report.to_dict(),
            'errors': dict(result.errors),
        }
        if result.contributions is not None:
            entry['contributions'] = result.contributions.to_dict(orient='records')
        entries.append(entry)

    report = {
        'tool': __tool__,
        'version': __version__,
        'inputs': inputs,
        'requested_measures': list(measures),
        'results': entries,
        'warnings': warnings,
    }
    return round_floats(report, digits)


def report_to_json(report: Dict[str, Any]) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation."""
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_to_frame(report: Dict[str, Any]) -> pd.DataFrame:
    """One row per predicted partition, one column per measure field."""
    rows = []
    for entry in report['results']:
        row = {'predicted': entry['predicted']}
        row.update(entry['measures'])
        for name, message in sorted(entry['errors'].items()):
            row[f'{name}_error'] = message
        rows.append(row)
    return pd.DataFrame(rows)


def report_to_csv(report: Dict[str, Any]) -> str:
    return report_to_frame(report).to_csv(index=False, lineterminator="\n")
