"""Exact maximum social welfare partitions for graphs with harmonic-distance utilities."""

from __future__ import annotations

from .graph import Graph, GraphError, Tree, parse_edge_list, read_edge_list
from .oracle import GraphTooLargeError, solve_exact, solve_exact_allow_disconnected_blocks
from .path import solve_path
from .reduction import XsatError, XsatInstance, assignment_to_partition, build_gadget, verify_threshold
from .tree import TreeDP, solve_tree
from .welfare import Partition, PartitionError, Solution, avg_welfare, utility, welfare

__all__ = [
    "Graph", "GraphError", "Tree", "parse_edge_list", "read_edge_list",
    "GraphTooLargeError", "solve_exact", "solve_exact_allow_disconnected_blocks",
    "solve_path", "TreeDP", "solve_tree",
    "XsatError", "XsatInstance", "assignment_to_partition", "build_gadget", "verify_threshold",
    "Partition", "PartitionError", "Solution", "avg_welfare", "utility", "welfare",
]
