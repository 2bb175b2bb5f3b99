"""Slow, independent reference implementations used only as test oracles.

Distances come from networkx and optima from plain enumeration of set
partitions, so nothing here shares code with the package under test.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import networkx as nx


def nx_graph(n, edges) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(n))
    h.add_edges_from((int(u), int(v)) for u, v in edges)
    return h


def ref_block_welfare(h: nx.Graph, block) -> Fraction:
    sub = h.subgraph(block)
    total = Fraction(0)
    for _, dists in nx.all_pairs_shortest_path_length(sub):
        for d in dists.values():
            if d:
                total += Fraction(1, d)
    return total / len(block)


def ref_welfare(h: nx.Graph, blocks) -> Fraction:
    return sum((ref_block_welfare(h, b) for b in blocks), Fraction(0))


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def ref_optimum(h: nx.Graph) -> Fraction:
    """Maximum welfare over every set partition (use for n <= 10)."""
    cache = {}

    def w(block):
        key = frozenset(block)
        if key not in cache:
            cache[key] = ref_block_welfare(h, block)
        return cache[key]

    return max(sum((w(b) for b in p), Fraction(0)) for p in set_partitions(sorted(h.nodes)))
