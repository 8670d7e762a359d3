"""
Partition representation and contingency tables
"""

from .partition_model import (
    Partition,
    ContingencyTable,
    contingency,
    require_same_nodes,
    parse_partition,
    load_partition,
    serialize_partition,
)

__all__ = [
    'Partition',
    'ContingencyTable',
    'contingency',
    'require_same_nodes',
    'parse_partition',
    'load_partition',
    'serialize_partition',
]
