"""
Shared fixtures: small graphs with known partitions and a file helper.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.graph.graph_model import Graph
from src.partition.partition_model import Partition

# Two five-node communities: node 2 is the hub of the left one, node 6 a
# boundary node of the right one with a single internal link.
FIGURE_EDGES = [
    (1, 2), (2, 3), (2, 4), (2, 5), (1, 3), (4, 5),
    (6, 7), (7, 8), (7, 9), (8, 9), (8, 10), (9, 10),
    (3, 6), (5, 6),
]


@pytest.fixture
def figure_graph() -> Graph:
    return Graph.from_edges(FIGURE_EDGES)


@pytest.fixture
def figure_reference() -> Partition:
    return Partition.from_parts([range(1, 6), range(6, 11)])


@pytest.fixture
def hub_moved() -> Partition:
    """Reference with the hub node 2 moved to the right community."""
    return Partition.from_parts([[1, 3, 4, 5], [2, 6, 7, 8, 9, 10]])


@pytest.fixture
def boundary_moved() -> Partition:
    """Reference with the boundary node 6 moved to the left community."""
    return Partition.from_parts([range(1, 7), range(7, 11)])


@pytest.fixture
def two_triangles() -> Graph:
    return Graph.from_edges([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (3, 4)])


@pytest.fixture
def triangle_partition() -> Partition:
    return Partition.from_parts([[1, 2, 3], [4, 5, 6]])


@pytest.fixture
def write(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return _write


@pytest.fixture
def path_four() -> Graph:
    return Graph.from_edges([(1, 2), (2, 3), (3, 4)])


@pytest.fixture
def path_partition() -> Partition:
    return Partition.from_parts([[1, 2], [3, 4]])
