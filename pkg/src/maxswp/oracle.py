"""Exact MaxSWP for arbitrary small graphs.

``solve_exact`` is a subset DP restricted to connected blocks: splitting a
disconnected coalition into its components never lowers welfare, so this is
lossless.  Block weights are integers scaled by ``lcm(1..n)**2``; for
``n <= 20`` every weight and every partial sum fits in int64 exactly.

``solve_exact_allow_disconnected_blocks`` drops the connectivity restriction
and works in :class:`~fractions.Fraction` throughout; it exists to check the
connectivity argument independently.
"""

from __future__ import annotations

import math
import os
import warnings
from fractions import Fraction

import numba
import numpy as np

from .graph import Graph, GraphError
from .welfare import Partition, Solution, coalition_welfare

# numba falls back to another threading layer on its own; the notice is noise
warnings.filterwarnings("ignore", message="The TBB threading layer", category=numba.NumbaWarning)

MAX_EXACT_N = 20
MAX_UNRESTRICTED_N = 12


class GraphTooLargeError(GraphError):
    """The exact solvers refuse graphs above their size cap."""


@numba.njit(cache=True)
def _is_connected(mask, nbr):
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        nxt = 0
        f = frontier
        while f:
            b = f & -f
            f ^= b
            nxt |= nbr[_bit_index(b)]
        nxt &= mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen == mask


@numba.njit(cache=True)
def _bit_index(b):
    i = 0
    while b > 1:
        b >>= 1
        i += 1
    return i


@numba.njit(cache=True)
def _block_weight(mask, nbr, n, lcm):
    """Scaled welfare ``lcm**2 * phi(G[mask])`` of a connected block."""
    size = 0
    verts = np.empty(n, dtype=np.int64)
    for v in range(n):
        if (mask >> v) & 1:
            verts[size] = v
            size += 1
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    recip = 0
    for i in range(size):
        src = verts[i]
        for v in range(n):
            dist[v] = -1
        dist[src] = 0
        head = 0
        tail = 1
        queue[0] = src
        while head < tail:
            u = queue[head]
            head += 1
            nb = nbr[u] & mask
            while nb:
                b = nb & -nb
                nb ^= b
                w = _bit_index(b)
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    recip += lcm // dist[w]
                    queue[tail] = w
                    tail += 1
    return recip * (lcm // size)


@numba.njit(parallel=True, cache=True)
def _weight_table(nbr, n, lcm):
    total = 1 << n
    w = np.full(total, -1, dtype=np.int64)
    for mask in numba.prange(1, total):
        if _is_connected(mask, nbr):
            w[mask] = _block_weight(mask, nbr, n, lcm)
    return w


@numba.njit(cache=True)
def _connected_dp(nbr, n, weight):
    total = 1 << n
    dp = np.zeros(total, dtype=np.int64)
    choice = np.zeros(total, dtype=np.int64)
    stack_s = np.empty(2 * n + 2, dtype=np.int64)
    stack_x = np.empty(2 * n + 2, dtype=np.int64)
    stack_e = np.empty(2 * n + 2, dtype=np.int64)
    for rest in range(1, total):
        low = rest & -rest
        best = -1
        best_block = 0
        # connected blocks inside `rest` containing its lowest vertex: include/exclude
        # branching on frontier vertices generates each such block exactly once
        top = 0
        stack_s[0] = low
        stack_x[0] = nbr[_bit_index(low)] & rest
        stack_e[0] = 0
        cand = weight[low] + dp[rest ^ low]
        best = cand
        best_block = low
        top = 1
        while top:
            top -= 1
            s = stack_s[top]
            x = stack_x[top]
            e = stack_e[top]
            if x == 0:
                continue
            u = x & -x
            stack_s[top] = s
            stack_x[top] = x ^ u
            stack_e[top] = e | u
            top += 1
            s2 = s | u
            x2 = ((x ^ u) | (nbr[_bit_index(u)] & rest)) & ~s2 & ~e
            cand = weight[s2] + dp[rest ^ s2]
            if cand > best or (cand == best and s2 < best_block):
                best = cand
                best_block = s2
            stack_s[top] = s2
            stack_x[top] = x2
            stack_e[top] = e
            top += 1
        dp[rest] = best
        choice[rest] = best_block
    return dp, choice


def _neighbor_masks(g: Graph) -> np.ndarray:
    adj = g.adjacency
    return np.array([sum(1 << w for w in adj[v]) for v in range(g.n)], dtype=np.int64)


def _blocks_from_choices(choice: np.ndarray, n: int) -> list[list[int]]:
    rest = (1 << n) - 1
    blocks = []
    while rest:
        b = int(choice[rest])
        blocks.append([v for v in range(n) if (b >> v) & 1])
        rest ^= b
    return blocks


def solve_exact(g: Graph, threads: int | None = None) -> Solution:
    """Optimal partition of a connected graph with at most 20 vertices."""
    if g.n > MAX_EXACT_N:
        raise GraphTooLargeError(f"exact solver is limited to {MAX_EXACT_N} vertices, got {g.n}")
    if g.n == 0:
        raise GraphError("empty graph")
    if not g.is_connected():
        raise GraphError("exact solver expects a connected graph")
    if threads:
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    n = g.n
    lcm = math.lcm(*range(1, n + 1))
    nbr = _neighbor_masks(g)
    weight = _weight_table(nbr, n, lcm)
    dp, choice = _connected_dp(nbr, n, weight)
    part = Partition(_blocks_from_choices(choice, n))
    return Solution(part, Fraction(int(dp[-1]), lcm * lcm))


def solve_exact_allow_disconnected_blocks(g: Graph) -> Solution:
    """Optimum over every partition, connected blocks or not (n <= 12)."""
    n = g.n
    if n > MAX_UNRESTRICTED_N:
        raise GraphTooLargeError(f"unrestricted solver is limited to {MAX_UNRESTRICTED_N} vertices, got {n}")
    if n == 0:
        raise GraphError("empty graph")
    full = (1 << n) - 1
    weight = [Fraction(0)] * (full + 1)
    for mask in range(1, full + 1):
        weight[mask] = coalition_welfare(g, [v for v in range(n) if (mask >> v) & 1])
    dp = [Fraction(0)] * (full + 1)
    choice = [0] * (full + 1)
    for rest in range(1, full + 1):
        low = rest & -rest
        others = rest ^ low
        best, best_block = None, 0
        sub = others
        while True:
            block = sub | low
            cand = weight[block] + dp[rest ^ block]
            if best is None or cand > best:
                best, best_block = cand, block
            if sub == 0:
                break
            sub = (sub - 1) & others
        dp[rest] = best
        choice[rest] = best_block
    blocks = []
    rest = full
    while rest:
        b = choice[rest]
        blocks.append([v for v in range(n) if (b >> v) & 1])
        rest ^= b
    return Solution(Partition(blocks), dp[full])


def default_threads() -> int:
    return os.cpu_count() or 1
