"""Closed-form optimal partitions of paths."""

from __future__ import annotations

from fractions import Fraction

from .welfare import PHI_P2, PHI_P3, PHI_P4, Partition, Solution


def _blocks_from_sizes(sizes: list[int]) -> list[range]:
    out, start = [], 0
    for s in sizes:
        out.append(range(start, start + s))
        start += s
    return out


def path_block_sizes(n: int) -> list[int]:
    """Block sizes of the emitted optimum of P_n, left to right.

    Residue 0 mod 3 uses only triples, residue 1 leads with a P4, residue 2
    leads with a P2.
    """
    if n < 1:
        raise ValueError("path needs at least one vertex")
    if n == 1:
        return [1]
    r = n % 3
    if r == 0:
        return [3] * (n // 3)
    if r == 1:
        return [4] + [3] * ((n - 4) // 3)
    return [2] + [3] * ((n - 2) // 3)


def path_block_sizes_alt(n: int) -> list[int]:
    """The second optimum for ``n % 3 == 2`` and ``n >= 8``: two P4 blocks then triples."""
    if n % 3 != 2 or n < 8:
        raise ValueError("the two-P4 family exists only for n = 2 (mod 3), n >= 8")
    return [4, 4] + [3] * ((n - 8) // 3)


_BLOCK_PHI = {1: Fraction(0), 2: PHI_P2, 3: PHI_P3, 4: PHI_P4}


def welfare_of_sizes(sizes: list[int]) -> Fraction:
    return sum((_BLOCK_PHI[s] for s in sizes), Fraction(0))


def solve_path(n: int) -> Solution:
    """Optimal partition of the path ``0-1-...-(n-1)`` and its welfare."""
    sizes = path_block_sizes(n)
    return Solution(Partition(_blocks_from_sizes(sizes)), welfare_of_sizes(sizes))


def solve_path_alt(n: int) -> Solution:
    sizes = path_block_sizes_alt(n)
    return Solution(Partition(_blocks_from_sizes(sizes)), welfare_of_sizes(sizes))
