"""Linear-time exact MaxSWP on trees by dynamic programming over coalition positions.

An optimal coalition in a tree induces a star, a P4 or the five-vertex
diameter-3 tree T35 (centers u1, u2; leaf s1 on u1; leaves t1, t2 on u2).  For
every vertex ``v`` of the rooted tree we keep, for each position ``v`` can take
in such a coalition restricted to the subtree ``T_v``, the best welfare of a
partition of ``T_v``:

======================  ===================================================
state                   coalition of ``v`` inside ``T_v``
======================  ===================================================
ISOLATED                ``{v}``
STAR_MID(f)             star with center ``v`` and ``f`` child leaves
STAR_LEAF(f)            star ``K_{1,f}`` with ``v`` a leaf, center a child
P4_LEAF                 P4 with ``v`` an end
P4_MID                  P4 with ``v`` an inner vertex
T35_S1 / T35_T          T35 with ``v`` the leaf ``s1`` / a leaf ``t``
T35_U1 / T35_U2         T35 with ``v`` a center
======================  ===================================================

When every value scaled by a common denominator ``D`` fits comfortably in 64
bits, the kernel runs compiled by numba on int64.  Otherwise the identical
kernel runs as plain Python over object arrays of exact fractions.  ``D`` is
the lcm of the star welfare denominators up to the maximum degree, so a single
high-degree hub is enough to force the fallback.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .graph import Graph, GraphError, Tree
from .welfare import PHI_P4, PHI_T35, Partition, Solution, star_welfare

ISO, P4_LEAF, P4_MID, T35_S1, T35_T, T35_U1, T35_U2 = range(7)
STAR_MID, STAR_LEAF = 7, 8
N_FIXED = 7

INT64_BUDGET = 2**62
# lcm(1..2*MAX_INT64_DEGREE) alone already exceeds the budget beyond this degree
MAX_INT64_DEGREE = 40


class StateTag(enum.IntEnum):
    ISOLATED = ISO
    P4_LEAF = P4_LEAF
    P4_MID = P4_MID
    T35_S1 = T35_S1
    T35_T = T35_T
    T35_U1 = T35_U1
    T35_U2 = T35_U2
    STAR_MID = STAR_MID
    STAR_LEAF = STAR_LEAF


@dataclass(frozen=True, order=True)
class CoalitionState:
    tag: StateTag
    f: int = 0

    def __post_init__(self):
        star = self.tag in (StateTag.STAR_MID, StateTag.STAR_LEAF)
        if star and self.f < 1:
            raise ValueError(f"{self.tag.name} needs a leaf count f >= 1")
        if not star and self.f:
            raise ValueError(f"{self.tag.name} takes no leaf count")

    def __str__(self) -> str:
        return f"{self.tag.name}({self.f})" if self.f else self.tag.name


def _build_kernels(jit):
    @jit
    def push_top3(tv, ti, cnt, val, idx):
        size = cnt if cnt < 3 else 3
        j = size
        while j > 0 and val > tv[j - 1]:
            j -= 1
        if j >= 3:
            return cnt
        k = size if size < 3 else 2
        while k > j:
            tv[k] = tv[k - 1]
            ti[k] = ti[k - 1]
            k -= 1
        tv[j] = val
        ti[j] = idx
        return cnt + 1 if cnt < 3 else 3

    @jit
    def best_pair(tva, tia, ca, tvb, tib, cb, res, ires):
        found = False
        for i in range(ca):
            for j in range(cb):
                if tia[i] != tib[j]:
                    s = tva[i] + tvb[j]
                    if not found or s > res[0]:
                        res[0] = s
                        ires[0] = tia[i]
                        ires[1] = tib[j]
                        found = True
        return found

    @jit
    def best_triple(tva, tia, ca, tvb, tib, cb, res, ires):
        found = False
        for i in range(ca):
            a = tia[i]
            for j in range(cb):
                if tib[j] == a:
                    continue
                for k in range(j + 1, cb):
                    if tib[k] == a:
                        continue
                    s = tva[i] + tvb[j] + tvb[k]
                    if not found or s > res[0]:
                        res[0] = s
                        ires[0] = a
                        ires[1] = tib[j]
                        ires[2] = tib[k]
                        found = True
        return found

    @jit
    def forward(order, child_ptr, child_idx, leaf_ptr, star, p4, t35, zero,
                fix, fok, fhint, best, bstate, bf, mid, perm, leafv, leafk,
                dbuf, gbuf, kbuf, tva, tia, tvb, tib, tvc, tic, res, ires):
        n = order.shape[0]
        for oi in range(n - 1, -1, -1):
            v = order[oi]
            cp = child_ptr[v]
            c = child_ptr[v + 1] - cp
            for h in range(N_FIXED):
                fok[v, h] = False
                fhint[v, h, 0] = -1
                fhint[v, h, 1] = -1
                fhint[v, h, 2] = -1

            s = zero
            for j in range(c):
                s += best[child_idx[cp + j]]
            fix[v, ISO] = s
            fok[v, ISO] = True
            top = s
            top_state = ISO
            top_f = 0
            if c == 0:
                best[v] = top
                bstate[v] = top_state
                bf[v] = top_f
                continue

            # v is the center: absorb the f children that lose least by staying isolated
            for j in range(c):
                w = child_idx[cp + j]
                dbuf[j] = best[w] - fix[w, ISO]
            p = np.argsort(dbuf[:c], kind="mergesort")
            acc = s
            for f in range(1, c + 1):
                perm[cp + f - 1] = child_idx[cp + p[f - 1]]
                acc = acc - dbuf[p[f - 1]]
                val = star[f] + acc
                mid[cp + f - 1] = val

            # v is a leaf hanging off a child that is the center of K_{1,f-1}
            lp = leaf_ptr[v]
            nl = leaf_ptr[v + 1] - lp
            for g in range(nl):
                kbuf[g] = -1
            for j in range(c):
                w = child_idx[cp + j]
                cwp = child_ptr[w]
                cw = child_ptr[w + 1] - cwp
                bw = best[w]
                for g in range(cw + 1):
                    if g == 0:
                        gain = fix[w, ISO] - bw
                    else:
                        gain = mid[cwp + g - 1] - bw
                    if kbuf[g] < 0 or gain > gbuf[g]:
                        gbuf[g] = gain
                        kbuf[g] = w
            for f in range(1, nl + 1):
                val = s + star[f] - star[f - 1] + gbuf[f - 1]
                leafv[lp + f - 1] = val
                leafk[lp + f - 1] = kbuf[f - 1]

            ca = 0
            cb = 0
            cc = 0
            for j in range(c):
                w = child_idx[cp + j]
                bw = best[w]
                wl = leaf_ptr[w]
                nlw = leaf_ptr[w + 1] - wl
                cw = child_ptr[w + 1] - child_ptr[w]
                cb = push_top3(tvb, tib, cb, fix[w, ISO] - bw, w)
                if nlw >= 1:
                    ca = push_top3(tva, tia, ca, leafv[wl] - bw, w)
                if cw >= 2:
                    cc = push_top3(tvc, tic, cc, mid[child_ptr[w] + 1] - bw, w)
                if nlw >= 2:
                    val = s + p4 - star[2] + leafv[wl + 1] - bw
                    if not fok[v, P4_LEAF] or val > fix[v, P4_LEAF]:
                        fix[v, P4_LEAF] = val
                        fok[v, P4_LEAF] = True
                        fhint[v, P4_LEAF, 0] = w
                if nlw >= 3:
                    val = s + t35 - star[3] + leafv[wl + 2] - bw
                    if not fok[v, T35_S1] or val > fix[v, T35_S1]:
                        fix[v, T35_S1] = val
                        fok[v, T35_S1] = True
                        fhint[v, T35_S1, 0] = w
                if fok[w, P4_MID]:
                    val = s + t35 - p4 + fix[w, P4_MID] - bw
                    if not fok[v, T35_T] or val > fix[v, T35_T]:
                        fix[v, T35_T] = val
                        fok[v, T35_T] = True
                        fhint[v, T35_T, 0] = w

            if best_pair(tva, tia, ca, tvb, tib, cb, res, ires):
                fix[v, P4_MID] = s + p4 - star[1] + res[0]
                fok[v, P4_MID] = True
                fhint[v, P4_MID, 0] = ires[0]
                fhint[v, P4_MID, 1] = ires[1]
            if best_pair(tvc, tic, cc, tvb, tib, cb, res, ires):
                fix[v, T35_U1] = s + t35 - star[2] + res[0]
                fok[v, T35_U1] = True
                fhint[v, T35_U1, 0] = ires[0]
                fhint[v, T35_U1, 1] = ires[1]
            if best_triple(tva, tia, ca, tvb, tib, cb, res, ires):
                fix[v, T35_U2] = s + t35 - star[1] + res[0]
                fok[v, T35_U2] = True
                fhint[v, T35_U2, 0] = ires[0]
                fhint[v, T35_U2, 1] = ires[1]
                fhint[v, T35_U2, 2] = ires[2]

            # ties go to the larger shape (T35, P4, stars by ascending f, isolated last):
            # scan from lowest to highest priority and let later candidates win on equality
            for f in range(c, 0, -1):
                if mid[cp + f - 1] >= top:
                    top = mid[cp + f - 1]
                    top_state = STAR_MID
                    top_f = f
            for f in range(nl, 0, -1):
                if leafv[lp + f - 1] >= top:
                    top = leafv[lp + f - 1]
                    top_state = STAR_LEAF
                    top_f = f
            for h in range(1, N_FIXED):
                if fok[v, h] and fix[v, h] >= top:
                    top = fix[v, h]
                    top_state = h
                    top_f = 0
            best[v] = top
            bstate[v] = top_state
            bf[v] = top_f

    @jit
    def backward(order, child_ptr, child_idx, leaf_ptr, fhint, bstate, bf, perm, leafk, st, sf, lab):
        n = order.shape[0]
        r = order[0]
        st[r] = bstate[r]
        sf[r] = bf[r]
        lab[r] = 0
        nxt = 1
        for oi in range(n):
            v = order[oi]
            cp = child_ptr[v]
            c = child_ptr[v + 1] - cp
            for j in range(c):
                st[child_idx[cp + j]] = -1
            s = st[v]
            f = sf[v]
            joined0 = -1
            joined1 = -1
            joined2 = -1
            if s == STAR_MID:
                for j in range(f):
                    w = perm[cp + j]
                    st[w] = ISO
                    sf[w] = 0
                    lab[w] = lab[v]
            elif s == STAR_LEAF:
                w = leafk[leaf_ptr[v] + f - 1]
                lab[w] = lab[v]
                if f == 1:
                    st[w] = ISO
                    sf[w] = 0
                else:
                    st[w] = STAR_MID
                    sf[w] = f - 1
            elif s != ISO:
                joined0 = fhint[v, s, 0]
                joined1 = fhint[v, s, 1]
                joined2 = fhint[v, s, 2]
                if s == P4_LEAF:
                    st[joined0] = STAR_LEAF
                    sf[joined0] = 2
                elif s == T35_S1:
                    st[joined0] = STAR_LEAF
                    sf[joined0] = 3
                elif s == T35_T:
                    st[joined0] = P4_MID
                    sf[joined0] = 0
                elif s == P4_MID or s == T35_U2:
                    st[joined0] = STAR_LEAF
                    sf[joined0] = 1
                elif s == T35_U1:
                    st[joined0] = STAR_MID
                    sf[joined0] = 2
                lab[joined0] = lab[v]
                if joined1 >= 0:
                    st[joined1] = ISO
                    sf[joined1] = 0
                    lab[joined1] = lab[v]
                if joined2 >= 0:
                    st[joined2] = ISO
                    sf[joined2] = 0
                    lab[joined2] = lab[v]
            for j in range(c):
                w = child_idx[cp + j]
                if st[w] == -1:
                    st[w] = bstate[w]
                    sf[w] = bf[w]
                    lab[w] = nxt
                    nxt += 1
        return nxt

    return forward, backward


_FORWARD_JIT, _BACKWARD_JIT = _build_kernels(numba.njit(cache=True))
_FORWARD_PY, _BACKWARD_PY = _build_kernels(lambda fn: fn)


def common_denominator(max_degree: int) -> int:
    """Least D making every block welfare constant used by the DP an integer multiple of 1/D."""
    dens = [6] + [star_welfare(f).denominator for f in range(1, max(max_degree, 3) + 1)]
    return math.lcm(*dens)


@functools.lru_cache(maxsize=64)
def _scaled_constants(max_degree: int) -> tuple[int, tuple[int, ...], int, int]:
    """``D`` and the block welfares of stars, P4 and T35 multiplied by ``D``."""
    D = common_denominator(max_degree)
    star = tuple(int(star_welfare(f) * D) for f in range(max(max_degree, 3) + 1))
    return D, star, int(PHI_P4 * D), int(PHI_T35 * D)


class TreeDP:
    """State tables of the tree DP for one rooted tree.

    ``backend`` is ``"auto"`` (compiled int64 when the value bound allows),
    ``"numba"`` or ``"python"`` (arbitrary precision, slow).
    """

    def __init__(self, tree: Graph, root: int | None = None, backend: str = "auto"):
        t = tree if isinstance(tree, Tree) else _as_tree(tree)
        n = t.n
        order, parent = t.rooted(root)
        self.tree = t
        self.n = n
        self.root = int(order[0])
        # The tables are indexed by BFS position rather than vertex id: the
        # children of every vertex are then contiguous and the bottom-up sweep
        # walks memory sequentially.  BFS meets children in increasing id order,
        # so tie-breaking is the same as with the original labels.
        self.order = order
        self._pos = pos = np.empty(n, dtype=np.int64)
        pos[order] = np.arange(n, dtype=np.int64)
        par = pos[parent[order[1:]]]
        counts = np.bincount(par, minlength=n) if n > 1 else np.zeros(n, dtype=np.int64)
        child_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=child_ptr[1:])
        child_idx = np.arange(1, n, dtype=np.int64)
        self.child_ptr, self.child_idx = child_ptr, child_idx
        seq = np.arange(n, dtype=np.int64)

        # StarLeaf(f) exists for f = 1 .. 1 + max child fan-out
        max_child_c = np.zeros(n, dtype=np.int64)
        if n > 1:
            np.maximum.at(max_child_c, par, counts[1:])
        n_leaf = np.where(counts > 0, max_child_c + 1, 0)
        leaf_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(n_leaf, out=leaf_ptr[1:])
        self.leaf_ptr = leaf_ptr

        max_deg = int(t.degrees().max()) if n > 1 else 0
        fits = max_deg <= MAX_INT64_DEGREE
        if fits:
            D, star_scaled, p4, t35 = _scaled_constants(max_deg)
            fits = D * (2 * n + 16) < INT64_BUDGET
        if backend == "auto":
            backend = "numba" if fits else "python"
        if backend == "numba" and not fits:
            raise OverflowError(f"scaled values for n={n}, max degree {max_deg} exceed 64 bits; "
                                "use the python backend")
        if backend not in ("numba", "python"):
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend

        if backend == "numba":
            vtype = np.int64
            zero = np.int64(0)
            star = np.array(star_scaled, dtype=np.int64)
            p4, t35 = np.int64(p4), np.int64(t35)
        else:
            D = 1
            vtype = object
            zero = Fraction(0)
            star = np.array([star_welfare(f) for f in range(max(max_deg, 3) + 1)], dtype=object)
            p4, t35 = PHI_P4, PHI_T35
        self.denominator = D

        m = max(n - 1, 1)
        width = max(int(leaf_ptr[-1]), 1)
        scratch = max(int(counts.max()) + 2 if n else 2, 4)
        self.fix = np.zeros((n, N_FIXED), dtype=vtype)
        self.fok = np.zeros((n, N_FIXED), dtype=np.bool_)
        self.fhint = np.full((n, N_FIXED, 3), -1, dtype=np.int64)
        self.best = np.zeros(n, dtype=vtype)
        self.bstate = np.zeros(n, dtype=np.int64)
        self.bf = np.zeros(n, dtype=np.int64)
        self.mid = np.zeros(m, dtype=vtype)
        self.perm = np.zeros(m, dtype=np.int64)
        self.leafv = np.zeros(width, dtype=vtype)
        self.leafk = np.zeros(width, dtype=np.int64)

        forward = _FORWARD_JIT if backend == "numba" else _FORWARD_PY
        forward(seq, child_ptr, child_idx, leaf_ptr, star, p4, t35, zero,
                self.fix, self.fok, self.fhint, self.best, self.bstate, self.bf,
                self.mid, self.perm, self.leafv, self.leafk,
                np.zeros(scratch, dtype=vtype), np.zeros(scratch, dtype=vtype),
                np.zeros(scratch, dtype=np.int64),
                np.zeros(3, dtype=vtype), np.zeros(3, dtype=np.int64),
                np.zeros(3, dtype=vtype), np.zeros(3, dtype=np.int64),
                np.zeros(3, dtype=vtype), np.zeros(3, dtype=np.int64),
                np.zeros(1, dtype=vtype), np.zeros(3, dtype=np.int64))

    def _q(self, x) -> Fraction:
        if self.backend == "python":
            return Fraction(x)
        return Fraction(int(x), self.denominator)

    def children(self, v: int) -> list[int]:
        p = self._pos[v]
        return self.order[self.child_idx[self.child_ptr[p]:self.child_ptr[p + 1]]].tolist()

    def rho(self, v: int) -> Fraction:
        """Best welfare over all partitions of the subtree rooted at ``v``."""
        return self._q(self.best[self._pos[v]])

    def best_state(self, v: int) -> CoalitionState:
        p = self._pos[v]
        return CoalitionState(StateTag(int(self.bstate[p])), int(self.bf[p]))

    def rho_state(self, v: int, state: CoalitionState) -> Fraction | None:
        """Best welfare of ``T_v`` with ``v`` in the given position; ``None`` if unreachable."""
        return self.states(v).get(state)

    def states(self, v: int) -> dict[CoalitionState, Fraction]:
        """All reachable states of ``v`` with their values."""
        p = int(self._pos[v])
        out = {}
        for tag in (ISO, P4_LEAF, P4_MID, T35_S1, T35_T, T35_U1, T35_U2):
            if self.fok[p, tag]:
                out[CoalitionState(StateTag(tag))] = self._q(self.fix[p, tag])
        cp, c = self.child_ptr[p], int(self.child_ptr[p + 1] - self.child_ptr[p])
        for f in range(1, c + 1):
            out[CoalitionState(StateTag.STAR_MID, f)] = self._q(self.mid[cp + f - 1])
        lp, nl = self.leaf_ptr[p], int(self.leaf_ptr[p + 1] - self.leaf_ptr[p])
        for f in range(1, nl + 1):
            out[CoalitionState(StateTag.STAR_LEAF, f)] = self._q(self.leafv[lp + f - 1])
        return out

    def labels(self) -> np.ndarray:
        """Block label per vertex of an optimal partition (walks the stored choices)."""
        n = self.n
        st = np.zeros(n, dtype=np.int64)
        sf = np.zeros(n, dtype=np.int64)
        lab = np.zeros(n, dtype=np.int64)
        backward = _BACKWARD_JIT if self.backend == "numba" else _BACKWARD_PY
        backward(np.arange(n, dtype=np.int64), self.child_ptr, self.child_idx, self.leaf_ptr, self.fhint,
                 self.bstate, self.bf, self.perm, self.leafk, st, sf, lab)
        out = np.empty(n, dtype=np.int64)
        out[self.order] = lab
        return out

    def solve(self) -> Solution:
        return Solution(Partition.from_labels(self.labels()), self.rho(self.root))


def _as_tree(g: Graph) -> Tree:
    try:
        return Tree.from_graph(g)
    except GraphError as exc:
        raise GraphError(f"solve_tree needs a tree: {exc}") from None


def solve_tree(tree: Graph, root: int | None = None, backend: str = "auto") -> Solution:
    """Maximum-welfare partition of a tree and its exact welfare."""
    return TreeDP(tree, root=root, backend=backend).solve()
