"""Test-corpus generators: Prüfer trees and the named graphs used throughout."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numba
import numpy as np

from .graph import Graph, GraphError, Tree

MAX_ENUMERATION_N = 9


@numba.njit(cache=True)
def _prufer_edges(seq: np.ndarray, n: int) -> np.ndarray:
    degree = np.ones(n, dtype=np.int64)
    for x in seq:
        degree[x] += 1
    edges = np.empty((n - 1, 2), dtype=np.int64)
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(seq.shape[0]):
        x = seq[i]
        edges[i, 0] = leaf
        edges[i, 1] = x
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges[n - 2, 0] = leaf
    edges[n - 2, 1] = n - 1
    return edges


def prufer_to_tree(seq: Sequence[int], n: int | None = None) -> Tree:
    """Decode a Prüfer sequence (entries in ``0..n-1``, length ``n-2``) in linear time."""
    arr = np.asarray(seq, dtype=np.int64)
    n = arr.size + 2 if n is None else n
    if arr.size != n - 2 and n > 1:
        raise GraphError(f"Prüfer sequence for n={n} must have length {n - 2}")
    if n == 1:
        return Tree(1, ())
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError("Prüfer entries must lie in 0..n-1")
    return Tree(n, _prufer_edges(arr, n))


def random_tree(n: int, seed: int | None = None) -> Tree:
    """Uniformly random labeled tree on ``n`` vertices."""
    if n < 1:
        raise GraphError("n must be at least 1")
    rng = np.random.default_rng(seed)
    return prufer_to_tree(rng.integers(0, n, size=max(n - 2, 0)), n)


def enumerate_labeled_trees(n: int) -> Iterator[Tree]:
    """All ``n**(n-2)`` labeled trees on ``n`` vertices (``n <= 9``)."""
    if n < 1:
        raise GraphError("n must be at least 1")
    if n > MAX_ENUMERATION_N:
        raise GraphError(f"refusing to enumerate labeled trees for n={n} > {MAX_ENUMERATION_N}")
    if n == 1:
        yield Tree(1, ())
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield Tree(n, _prufer_edges(np.array(seq, dtype=np.int64), n))


def path_graph(n: int) -> Tree:
    return Tree(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Tree:
    """K_{1,leaves} with center 0."""
    return Tree(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def diam3_tree(k: int, l: int) -> Tree:
    """Two adjacent centers 0 and 1 carrying ``k`` and ``l`` leaves respectively."""
    if k < 1 or l < 1:
        raise GraphError("diameter-3 tree needs k, l >= 1")
    edges = [(0, 1)]
    edges += [(0, 2 + i) for i in range(k)]
    edges += [(1, 2 + k + j) for j in range(l)]
    return Tree(k + l + 2, edges)


def t35() -> Tree:
    """The five-vertex diameter-3 tree: centers 0 (one leaf) and 1 (two leaves)."""
    return diam3_tree(1, 2)


def diam4_tree(leaf_counts: Sequence[int]) -> Tree:
    """Center 0 with arms ``u_i`` each carrying ``leaf_counts[i]`` leaves.

    The first two arms need at least one leaf so that the diameter is exactly 4.
    """
    counts = list(leaf_counts)
    if len(counts) < 2 or counts[0] < 1 or counts[1] < 1 or min(counts) < 0:
        raise GraphError("diameter-4 tree needs k >= 2 arms with l_1, l_2 >= 1 and l_i >= 0")
    edges = []
    nxt = 1 + len(counts)
    for i, cnt in enumerate(counts):
        u = 1 + i
        edges.append((0, u))
        for _ in range(cnt):
            edges.append((u, nxt))
            nxt += 1
    return Tree(nxt, edges)


def triangle() -> Graph:
    return complete_graph(3)


def double_triangle() -> Graph:
    """Two triangles sharing the edge (0, 1)."""
    return Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])


def triple_triangle() -> Graph:
    """Three triangles sharing the edge (0, 1)."""
    return Graph(5, [(0, 1)] + [(a, b) for b in (2, 3, 4) for a in (0, 1)])
