"""
Graph Model

Immutable undirected graph with optional edge weights, degree and
strength queries relative to a partition, and the edge-list file format
("u v [w]" per line, '#' comments, a lone "u" declares an isolated node).
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from src.partition.partition_model import Partition
from src.utils.exceptions import DegenerateComputationError, InputError, UnknownNodeError

logger = logging.getLogger(__name__)

Edge = Tuple[str, str, float]


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected simple graph over string node tokens.

    Node tokens are mapped to dense indices in declaration order; edges
    are stored once with their endpoints' indices and a positive weight.

    Attributes:
        nodes: Node tokens, index order
        sources: Index of the first endpoint of each edge
        targets: Index of the second endpoint of each edge
        weights: Edge weights (1.0 for unweighted edges)
    """

    nodes: Tuple[str, ...]
    sources: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    _index: Dict[str, int] = field(init=False, repr=False)
    _adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        index = {node: i for i, node in enumerate(self.nodes)}
        if len(index) != len(self.nodes):
            raise InputError("duplicate node declaration")

        sources = np.asarray(self.sources, dtype=np.int64)
        targets = np.asarray(self.targets, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if not (len(sources) == len(targets) == len(weights)):
            raise ValueError("edge arrays must have equal length")

        n = len(self.nodes)
        neighbours: List[List[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v, w in zip(sources.tolist(), targets.tolist(), weights.tolist()):
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge endpoint outside the node set: ({u}, {v})")
            if u == v:
                raise InputError(f"self-loop on node {self.nodes[u]}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(
                    f"duplicate undirected edge {self.nodes[u]} {self.nodes[v]}"
                )
            if not (w > 0 and math.isfinite(w)):
                raise InputError(f"non-positive edge weight {w}")
            seen.add(key)
            neighbours[u].append(v)
            neighbours[v].append(u)

        for array in (sources, targets, weights):
            array.setflags(write=False)
        object.__setattr__(self, 'sources', sources)
        object.__setattr__(self, 'targets', targets)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, '_index', index)
        object.__setattr__(self, '_adjacency', tuple(tuple(a) for a in neighbours))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Union[Tuple[Hashable, Hashable], Tuple[Hashable, Hashable, float]]],
        nodes: Optional[Iterable[Hashable]] = None
    ) -> "Graph":
        """
        Build a graph from (u, v) or (u, v, w) tuples.

        Args:
            edges: Edge tuples; node tokens are converted with ``str``
            nodes: Extra nodes (isolated ones included); declared first

        Returns:
            Graph

        Raises:
            InputError: On self-loops, duplicate edges or bad weights
        """
        index: Dict[str, int] = {}
        for node in nodes or ():
            index.setdefault(str(node), len(index))
        sources, targets, weights = [], [], []
        for edge in edges:
            u, v = str(edge[0]), str(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            sources.append(index.setdefault(u, len(index)))
            targets.append(index.setdefault(v, len(index)))
            weights.append(w)
        return cls(tuple(index), np.array(sources, dtype=np.int64),
                   np.array(targets, dtype=np.int64), np.array(weights, dtype=np.float64))

    # Basic structure --------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.sources)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def is_weighted(self) -> bool:
        return bool(np.any(self.weights != 1.0))

    def __contains__(self, node: Hashable) -> bool:
        return str(node) in self._index

    def index_of(self, node: Hashable) -> int:
        """
        Dense index of a node token.

        Raises:
            UnknownNodeError: If the node is not in the graph
        """
        token = str(node)
        try:
            return self._index[token]
        except KeyError:
            raise UnknownNodeError(f"unknown node: {token}") from None

    def neighbors(self, node: Hashable) -> Tuple[str, ...]:
        return tuple(self.nodes[v] for v in self._adjacency[self.index_of(node)])

    def edges(self) -> Iterator[Edge]:
        """Iterate over (u, v, weight) with original node tokens."""
        for u, v, w in zip(self.sources.tolist(), self.targets.tolist(), self.weights.tolist()):
            yield self.nodes[u], self.nodes[v], w

    # Degrees ----------------------------------------------------------

    def degrees(self) -> np.ndarray:
        """Degree of every node, index order."""
        n = self.node_count
        return (np.bincount(self.sources, minlength=n)
                + np.bincount(self.targets, minlength=n)).astype(np.int64)

    def degree(self, node: Hashable) -> int:
        return len(self._adjacency[self.index_of(node)])

    def max_degree(self) -> int:
        """
        Largest degree in the graph.

        Raises:
            DegenerateComputationError: If the graph has no nodes
        """
        if self.node_count == 0:
            raise DegenerateComputationError("max degree of an empty graph")
        return int(self.degrees().max())

    def strengths(self) -> np.ndarray:
        """Sum of incident edge weights of every node, index order."""
        n = self.node_count
        return (np.bincount(self.sources, weights=self.weights, minlength=n)
                + np.bincount(self.targets, weights=self.weights, minlength=n))

    def strength(self, node: Hashable) -> float:
        return float(self.strengths()[self.index_of(node)])

    # Partition-relative queries ---------------------------------------

    def internal_mask(self, partition: Partition) -> np.ndarray:
        """
        Boolean mask of the edges whose endpoints share a community.

        Raises:
            PartitionMismatchError: If the partition does not cover the node set
        """
        membership = partition.membership(self.nodes)
        return membership[self.sources] == membership[self.targets]

    def internal_degrees(self, partition: Partition) -> np.ndarray:
        inside = self.internal_mask(partition)
        n = self.node_count
        return (np.bincount(self.sources[inside], minlength=n)
                + np.bincount(self.targets[inside], minlength=n)).astype(np.int64)

    def internal_degree(self, partition: Partition, node: Hashable) -> int:
        u = self.index_of(node)
        return int(self.internal_degrees(partition)[u])

    def internal_strengths(self, partition: Partition) -> np.ndarray:
        inside = self.internal_mask(partition)
        n = self.node_count
        w = self.weights[inside]
        return (np.bincount(self.sources[inside], weights=w, minlength=n)
                + np.bincount(self.targets[inside], weights=w, minlength=n))

    def internal_strength(self, partition: Partition, node: Hashable) -> float:
        u = self.index_of(node)
        return float(self.internal_strengths(partition)[u])

    def embeddedness_values(self, partition: Partition) -> np.ndarray:
        """d_int(u)/d(u) for every node; 0 for isolated nodes."""
        degrees = self.degrees()
        internal = self.internal_degrees(partition)
        values = np.zeros(self.node_count, dtype=np.float64)
        connected = degrees > 0
        values[connected] = internal[connected] / degrees[connected]
        return values

    def embeddedness(self, partition: Partition, node: Hashable) -> float:
        u = self.index_of(node)
        return float(self.embeddedness_values(partition)[u])


def parse_edge_list(text: Union[str, bytes], source: Optional[str] = None) -> Graph:
    """
    Parse an edge-list file.

    Args:
        text: File content
        source: Name used in error messages

    Returns:
        Graph holding every endpoint and every declared isolated node

    Raises:
        InputError: On malformed lines, self-loops, duplicate edges or
            non-positive weights; the message names the line
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise InputError(f"not valid UTF-8: {e}", source) from e

    index: Dict[str, int] = {}
    sources: List[int] = []
    targets: List[int] = []
    weights: List[float] = []
    seen = set()

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) == 1:
            index.setdefault(tokens[0], len(index))
            continue
        if len(tokens) > 3:
            raise InputError(f"malformed line, expected 'u v [w]': {line!r}", source, line_number)

        u, v = tokens[0], tokens[1]
        weight = 1.0
        if len(tokens) == 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise InputError(f"malformed weight {tokens[2]!r}", source, line_number) from None
            if not (weight > 0 and math.isfinite(weight)):
                raise InputError(f"non-positive edge weight {tokens[2]}", source, line_number)
        if u == v:
            raise InputError(f"self-loop on node {u}", source, line_number)

        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise InputError(f"duplicate undirected edge {u} {v}", source, line_number)
        seen.add(key)

        sources.append(index.setdefault(u, len(index)))
        targets.append(index.setdefault(v, len(index)))
        weights.append(weight)

    graph = Graph(tuple(index), np.array(sources, dtype=np.int64),
                  np.array(targets, dtype=np.int64), np.array(weights, dtype=np.float64))
    logger.info(f"Parsed graph with {graph.node_count} nodes and {graph.edge_count} edges")
    return graph


def load_graph(path: Union[str, Path]) -> Graph:
    """
    Load an edge-list file.

    Raises:
        InputError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise InputError(f"cannot read graph file: {e.strerror}", str(path)) from e
    return parse_edge_list(data, source=str(path))


def serialize_edge_list(graph: Graph) -> str:
    """
    Render a graph in the edge-list format.

    Weights are written only when they differ from 1.0, using the
    shortest round-trip representation; isolated nodes follow the edges.
    """
    lines = []
    for u, v, w in graph.edges():
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w!r}")
    degrees = graph.degrees()
    lines.extend(node for node, d in zip(graph.nodes, degrees) if d == 0)
    return "\n".join(lines) + "\n" if lines else ""
