"""
Graph representation and edge-list parsing
"""

from .graph_model import Graph, parse_edge_list, load_graph, serialize_edge_list

__all__ = ['Graph', 'parse_edge_list', 'load_graph', 'serialize_edge_list']
