"""Utilities, social welfare and closed-form grand-coalition welfare values.

Every quantity is an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import Graph, GraphError, bfs_distances, diameter, is_tree


class PartitionError(ValueError):
    """Raised when a family of blocks is not a partition of the vertex set."""


class Partition:
    """A disjoint cover of ``0..n-1`` by nonempty coalitions.

    Built either from explicit blocks or from a per-vertex block label array;
    the other representation is derived lazily.
    """

    __slots__ = ("_blocks", "_labels")

    def __init__(self, blocks: Iterable[Iterable[int]]):
        self._blocks: tuple[frozenset[int], ...] | None = tuple(frozenset(b) for b in blocks)
        self._labels: np.ndarray | None = None

    @classmethod
    def from_labels(cls, labels: np.ndarray) -> Partition:
        p = cls.__new__(cls)
        p._blocks = None
        p._labels = np.asarray(labels, dtype=np.int64)
        return p

    @classmethod
    def grand(cls, n: int) -> Partition:
        return cls([range(n)])

    @property
    def blocks(self) -> tuple[frozenset[int], ...]:
        if self._blocks is None:
            labels = self._labels
            order = np.argsort(labels, kind="stable")
            cuts = np.flatnonzero(np.diff(labels[order])) + 1
            self._blocks = tuple(frozenset(chunk.tolist()) for chunk in np.split(order, cuts))
        return self._blocks

    def labels(self, n: int) -> np.ndarray:
        if self._labels is not None and self._labels.size == n:
            return self._labels
        self.validate(n)
        out = np.empty(n, dtype=np.int64)
        for i, b in enumerate(self._blocks):
            out[list(b)] = i
        return out

    def validate(self, n: int) -> None:
        if self._blocks is None:
            if self._labels.size != n:
                raise PartitionError(f"label array covers {self._labels.size} vertices, expected {n}")
            return
        seen: set[int] = set()
        for b in self._blocks:
            if not b:
                raise PartitionError("empty block")
            bad = [v for v in b if not 0 <= v < n]
            if bad:
                raise PartitionError(f"vertices {sorted(bad)} outside 0..{n - 1}")
            overlap = seen & b
            if overlap:
                raise PartitionError(f"vertices {sorted(overlap)} appear in more than one block")
            seen |= b
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise PartitionError(f"vertices {missing[:10]} are not covered")

    def sorted_blocks(self) -> list[list[int]]:
        """Blocks as sorted id lists, ordered by smallest member."""
        return sorted((sorted(b) for b in self.blocks), key=lambda b: b[0])

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and set(self.blocks) == set(other.blocks)

    def __hash__(self) -> int:
        return hash(frozenset(self.blocks))

    def __repr__(self) -> str:
        return f"Partition({self.sorted_blocks()})"


class Solution(NamedTuple):
    partition: Partition
    welfare: Fraction


# -- JSON helpers --------------------------------------------------------------

def rational_to_json(q: Fraction) -> dict[str, str]:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(obj: dict) -> Fraction:
    try:
        return Fraction(int(obj["num"]), int(obj["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {obj!r}") from exc


# -- utilities and welfare -----------------------------------------------------

def _reciprocal_distance_sum(g: Graph, v: int, c: frozenset[int]) -> Fraction:
    dist = bfs_distances(g, v, c)
    total = Fraction(0)
    for d in dist.values():
        if d:
            total += Fraction(1, d)
    return total


def utility(g: Graph, v: int, c: Iterable[int]) -> Fraction:
    """Average reciprocal distance from ``v`` to its coalition mates.

    Mates unreachable inside the coalition contribute nothing; a singleton
    coalition has utility 0.
    """
    cs = frozenset(c)
    if v not in cs:
        raise PartitionError(f"vertex {v} is not a member of the coalition")
    return _reciprocal_distance_sum(g, v, cs) / len(cs)


def coalition_welfare(g: Graph, c: Iterable[int]) -> Fraction:
    cs = frozenset(c)
    if not cs:
        raise PartitionError("empty coalition")
    total = sum((_reciprocal_distance_sum(g, v, cs) for v in cs), Fraction(0))
    return total / len(cs)


def welfare(g: Graph, p: Partition | Iterable[Iterable[int]]) -> Fraction:
    if not isinstance(p, Partition):
        p = Partition(p)
    p.validate(g.n)
    return sum((coalition_welfare(g, b) for b in p.blocks), Fraction(0))


def avg_welfare(g: Graph, p: Partition | Iterable[Iterable[int]]) -> Fraction:
    return welfare(g, p) / g.n


def grand_welfare(g: Graph) -> Fraction:
    return coalition_welfare(g, range(g.n))


# -- closed forms --------------------------------------------------------------

def _harmonic_split(a: int, b: int) -> tuple[int, int]:
    """Numerator and denominator of sum_{i=a}^{b-1} 1/i by binary splitting."""
    if b - a == 1:
        return 1, a
    mid = (a + b) // 2
    p1, q1 = _harmonic_split(a, mid)
    p2, q2 = _harmonic_split(mid, b)
    return p1 * q2 + p2 * q1, q1 * q2


def harmonic(k: int) -> Fraction:
    if k < 0:
        raise ValueError("harmonic number of a negative index")
    if k == 0:
        return Fraction(0)
    return Fraction(*_harmonic_split(1, k + 1))


def star_welfare(f: int) -> Fraction:
    """Grand-coalition welfare of the star K_{1,f}."""
    if f < 0:
        raise ValueError("leaf count must be non-negative")
    n = f + 1
    return Fraction((n - 1) * (n + 2), 2 * n)


def path_welfare(n: int) -> Fraction:
    """Grand-coalition welfare of P_n, ``2 * sum_{k<n} h(k) / n``."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    # sum_{k=1}^{n-1} h(k) = n*h(n-1) - (n-1)
    return 2 * (n * harmonic(n - 1) + 1 - n) / n


def diam3_grand_welfare(k: int, l: int) -> Fraction:
    """Grand welfare of the diameter-3 tree with ``k`` and ``l`` leaves on its two centers."""
    if k < 1 or l < 1:
        raise ValueError("diameter-3 tree needs k, l >= 1")
    num = Fraction(k * k, 2) + Fraction(5 * k, 2) + Fraction(l * l, 2) + Fraction(5 * l, 2) + Fraction(2 * k * l, 3) + 2
    return num / (k + l + 2)


def diam4_grand_welfare(leaf_counts: Sequence[int]) -> Fraction:
    """Grand welfare of the diameter-4 tree whose center has arms with the given leaf counts."""
    counts = list(leaf_counts)
    k = len(counts)
    if k < 2 or counts[0] < 1 or counts[1] < 1 or min(counts) < 0:
        raise ValueError("diameter-4 tree needs k >= 2 arms with l_1, l_2 >= 1 and l_i >= 0")
    alpha = sum(counts)
    beta = sum(c * c for c in counts)
    num = (Fraction(alpha * alpha, 4) + Fraction(beta, 4) + Fraction(2 * k * alpha, 3)
           + Fraction(11 * alpha, 6) + Fraction(k * k, 2) + Fraction(3 * k, 2))
    return num / (k + alpha + 1)


# Block welfare constants that recur in the tree and path solvers.
PHI_P2 = Fraction(1)
PHI_P3 = Fraction(5, 3)
PHI_P4 = Fraction(13, 6)
PHI_T35 = Fraction(8, 3)


# -- the n/2 threshold for trees of small diameter -------------------------------

def diam3_shape(t: Graph) -> tuple[int, int]:
    """Leaf counts ``(k, l)`` on the two centers of a diameter-3 tree (``k <= l``)."""
    deg = t.degrees()
    centers = np.flatnonzero(deg > 1)
    if not is_tree(t) or centers.size != 2 or not t.has_edge(int(centers[0]), int(centers[1])):
        raise GraphError("not a diameter-3 tree")
    k, l = sorted(int(deg[c]) - 1 for c in centers)
    return k, l


def diam4_shape(t: Graph) -> list[int]:
    """Leaf counts of the arms around the center of a diameter-4 tree, descending."""
    if not is_tree(t) or diameter(t) != 4:
        raise GraphError("not a diameter-4 tree")
    for v in range(t.n):
        if max(bfs_distances(t, v).values()) == 2:
            return sorted((t.degree(int(u)) - 1 for u in t.neighbors(v)), reverse=True)
    raise GraphError("diameter-4 tree without a center")  # unreachable for trees


def diam3_meets_half(k: int, l: int) -> bool:
    """Case analysis for diameter-3 trees: is the grand welfare at least n/2?"""
    below = ((k == 2 and l >= 7) or (k >= 7 and l == 2)
             or (k > 3 and l >= 3) or (k >= 3 and l > 3))
    return not below


def diam4_meets_half(k: int, alpha: int) -> bool:
    """Case analysis for diameter-4 trees: only four (k, alpha) pairs reach n/2."""
    return (k, alpha) in {(2, 2), (2, 3), (3, 2), (4, 2)}


def predicted_meets_half(t: Graph) -> bool:
    """Whether the grand welfare of tree ``t`` is at least n/2, by diameter case analysis."""
    if not is_tree(t):
        raise GraphError("expected a tree")
    if t.n == 1:
        return False
    d = diameter(t)
    if d <= 2:
        return True
    if d == 3:
        return diam3_meets_half(*diam3_shape(t))
    if d == 4:
        counts = diam4_shape(t)
        return diam4_meets_half(len(counts), sum(counts))
    return False


def grand_meets_half(t: Graph) -> tuple[Fraction, bool]:
    """Exact grand welfare of tree ``t`` and whether it reaches n/2."""
    if not is_tree(t):
        raise GraphError("expected a tree")
    phi = grand_welfare(t)
    return phi, phi >= Fraction(t.n, 2)

