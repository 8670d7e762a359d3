"""
Partition Model

Community structures as disjoint covers of a node set, the contingency
table between two of them, and the partition file format
("node community" per line, '#' comments).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.metrics.cluster import contingency_matrix

from src.utils.exceptions import InputError, PartitionMismatchError, UnknownNodeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Partition:
    """
    A disjoint cover of a node set into named communities.

    Communities are indexed in canonical order: the order in which their
    token first appears. Empty parts cannot exist because parts are
    derived from the node assignment.

    Attributes:
        nodes: Node tokens in input order
        community_ids: Canonical community index of each node (aligned with ``nodes``)
        community_labels: Community tokens in canonical order
    """

    nodes: Tuple[str, ...]
    community_ids: np.ndarray
    community_labels: Tuple[str, ...]
    _position: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        position = {node: i for i, node in enumerate(self.nodes)}
        if len(position) != len(self.nodes):
            raise InputError("partition lists a node more than once")
        ids = np.asarray(self.community_ids, dtype=np.int64)
        ids.setflags(write=False)
        object.__setattr__(self, 'community_ids', ids)
        object.__setattr__(self, '_position', position)

    # Construction -----------------------------------------------------

    @classmethod
    def from_assignment(
        cls,
        assignment: Union[Mapping[Hashable, Hashable], Iterable[Tuple[Hashable, Hashable]]]
    ) -> "Partition":
        """
        Build a partition from node → community pairs.

        Args:
            assignment: Mapping or iterable of (node, community) pairs;
                iteration order fixes the canonical community order

        Returns:
            Partition

        Raises:
            InputError: If a node is assigned twice
        """
        pairs = assignment.items() if isinstance(assignment, Mapping) else assignment
        nodes: List[str] = []
        ids: List[int] = []
        labels: Dict[str, int] = {}
        seen = set()
        for node, community in pairs:
            token = str(node)
            if token in seen:
                raise InputError(f"node {token} assigned twice")
            seen.add(token)
            label = str(community)
            if label not in labels:
                labels[label] = len(labels)
            nodes.append(token)
            ids.append(labels[label])
        return cls(tuple(nodes), np.array(ids, dtype=np.int64), tuple(labels))

    @classmethod
    def from_parts(cls, parts: Iterable[Iterable[Hashable]]) -> "Partition":
        """Build a partition from a sequence of node collections; parts are labelled 0, 1, ..."""
        return cls.from_assignment(
            (node, index) for index, part in enumerate(parts) for node in part
        )

    @classmethod
    def singletons(cls, nodes: Iterable[Hashable]) -> "Partition":
        return cls.from_assignment((node, node) for node in nodes)

    @classmethod
    def single_part(cls, nodes: Iterable[Hashable]) -> "Partition":
        return cls.from_assignment((node, 0) for node in nodes)

    def moved(self, changes: Mapping[Hashable, Hashable]) -> "Partition":
        """
        Return a copy with some nodes reassigned.

        Args:
            changes: Mapping node → community label (existing or new)

        Returns:
            New partition; communities left empty disappear

        Raises:
            UnknownNodeError: If a changed node is not in the partition
        """
        updates = {str(node): str(community) for node, community in changes.items()}
        for node in updates:
            if node not in self._position:
                raise UnknownNodeError(f"unknown node: {node}")
        return Partition.from_assignment(
            (node, updates.get(node, self.community_labels[cid]))
            for node, cid in zip(self.nodes, self.community_ids)
        )

    # Queries ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def part_count(self) -> int:
        return len(self.community_labels)

    @property
    def part_sizes(self) -> np.ndarray:
        return np.bincount(self.community_ids, minlength=self.part_count)

    @property
    def parts(self) -> List[Tuple[str, ...]]:
        """Node sets x_1..x_I in canonical order."""
        buckets: List[List[str]] = [[] for _ in range(self.part_count)]
        for node, cid in zip(self.nodes, self.community_ids):
            buckets[cid].append(node)
        return [tuple(bucket) for bucket in buckets]

    @property
    def assignment(self) -> Dict[str, str]:
        return {
            node: self.community_labels[cid]
            for node, cid in zip(self.nodes, self.community_ids)
        }

    def __contains__(self, node: Hashable) -> bool:
        return str(node) in self._position

    def community_of(self, node: Hashable) -> int:
        """
        Canonical index of the community holding ``node``.

        Raises:
            UnknownNodeError: If the node is not covered
        """
        token = str(node)
        if token not in self._position:
            raise UnknownNodeError(f"unknown node: {token}")
        return int(self.community_ids[self._position[token]])

    def same_nodes(self, nodes: Iterable[Hashable]) -> bool:
        tokens = [str(node) for node in nodes]
        return len(tokens) == self.n and all(token in self._position for token in tokens)

    def membership(self, nodes: Sequence[Hashable]) -> np.ndarray:
        """
        Community indices aligned with an external node order.

        Args:
            nodes: The complete node set, in the caller's order

        Returns:
            Integer array ``m`` with ``m[k]`` the community of ``nodes[k]``

        Raises:
            PartitionMismatchError: If ``nodes`` is not exactly this partition's node set
        """
        tokens = [str(node) for node in nodes]
        if len(tokens) != self.n:
            missing = next((t for t in tokens if t not in self._position), None)
            if missing is not None:
                raise PartitionMismatchError(f"uncovered node: {missing}")
            raise PartitionMismatchError(
                f"node sets differ: {len(tokens)} nodes expected, partition has {self.n}"
            )
        try:
            return self.community_ids[[self._position[t] for t in tokens]]
        except KeyError as e:
            raise PartitionMismatchError(f"uncovered node: {e.args[0]}") from None

    def equivalent(self, other: "Partition") -> bool:
        """True when both partitions are equal up to community relabeling."""
        if not self.same_nodes(other.nodes) or self.part_count != other.part_count:
            return False
        table = contingency(self, other).counts
        return bool(np.all(np.count_nonzero(table, axis=1) == 1)
                    and np.all(np.count_nonzero(table, axis=0) == 1))


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """
    Overlap counts |x_i ∩ y_j| between two partitions.

    Attributes:
        counts: I×J integer matrix, rows follow X's canonical order
    """

    counts: np.ndarray

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.counts.shape

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.counts.T.copy())


def require_same_nodes(x: Partition, y: Partition) -> None:
    """Raise PartitionMismatchError unless x and y cover the same nodes."""
    if x.n != y.n:
        raise PartitionMismatchError(
            f"mismatched node sets: {x.n} vs {y.n} nodes"
        )
    for node in x.nodes:
        if node not in y:
            raise PartitionMismatchError(f"mismatched node sets: node {node} missing")


def contingency(x: Partition, y: Partition) -> ContingencyTable:
    """
    Build the contingency table between two partitions.

    Args:
        x: Row partition
        y: Column partition

    Returns:
        ContingencyTable with ``counts[i][j] = |x_i ∩ y_j|``

    Raises:
        PartitionMismatchError: If the node sets differ
    """
    require_same_nodes(x, y)
    # canonical indices are dense 0..I-1, so sorted labels keep canonical order
    counts = contingency_matrix(x.community_ids, y.membership(x.nodes))
    return ContingencyTable(np.asarray(counts, dtype=np.int64))


def parse_partition(
    text: Union[str, bytes],
    nodes: Optional[Iterable[Hashable]] = None,
    source: Optional[str] = None
) -> Partition:
    """
    Parse a partition file.

    Args:
        text: File content, one "node community" pair per line
        nodes: Node set the partition must cover exactly (None skips the check)
        source: Name used in error messages

    Returns:
        Partition in file order

    Raises:
        InputError: On malformed lines, repeated nodes, unknown or uncovered nodes
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise InputError(f"not valid UTF-8: {e}", source) from e

    expected = None if nodes is None else [str(node) for node in nodes]
    expected_set = None if expected is None else set(expected)

    pairs: Dict[str, str] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputError(
                f"malformed line, expected 'node community': {line!r}", source, line_number
            )
        node, community = tokens
        if node in pairs:
            raise InputError(f"node {node} assigned twice", source, line_number)
        if expected_set is not None and node not in expected_set:
            raise UnknownNodeError(f"unknown node: {node}", source, line_number)
        pairs[node] = community

    if expected is not None:
        for node in expected:
            if node not in pairs:
                raise PartitionMismatchError(f"uncovered node: {node}", source)

    partition = Partition.from_assignment(pairs)
    logger.info(f"Parsed partition with {partition.n} nodes in {partition.part_count} parts")
    return partition


def load_partition(path: Union[str, Path], nodes: Optional[Iterable[Hashable]] = None) -> Partition:
    """
    Load a partition file.

    Raises:
        InputError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise InputError(f"cannot read partition file: {e.strerror}", str(path)) from e
    return parse_partition(data, nodes, source=str(path))


def serialize_partition(partition: Partition) -> str:
    """Render a partition in the partition file format."""
    lines = [
        f"{node} {partition.community_labels[cid]}"
        for node, cid in zip(partition.nodes, partition.community_ids)
    ]
    return "\n".join(lines) + "\n" if lines else ""
