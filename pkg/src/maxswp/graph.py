"""Simple undirected graphs, trees, distances and the edge-list text format."""

from __future__ import annotations

from collections import deque
from pathlib import Path
from typing import Iterable, Sequence

import numba
import numpy as np


class GraphError(ValueError):
    """Raised for malformed graphs or violated graph preconditions."""


@numba.njit(cache=True)
def _bfs_order(indptr, indices, root):
    """BFS from ``root`` over CSR adjacency: visit order (truncated to the reached count) and parents."""
    n = indptr.shape[0] - 1
    parent = np.full(n, -2, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    parent[root] = -1
    order[0] = root
    head, tail = 0, 1
    while head < tail:
        u = order[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if parent[w] == -2:
                parent[w] = u
                order[tail] = w
                tail += 1
    return order[:tail], parent


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Adjacency is stored in CSR form (``indptr``/``indices``) so that graphs
    with millions of vertices stay cheap; neighbor lists are sorted.
    """

    __slots__ = ("n", "edges", "indptr", "indices", "_adj", "_connected")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] | np.ndarray = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GraphError("edges must be pairs of vertex ids")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphError(f"edge endpoint outside 0..{n - 1}")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise GraphError("self-loops are not allowed")
        arr = np.sort(arr, axis=1)
        keys = arr[:, 0] * n + arr[:, 1]
        if np.unique(keys).size != keys.size:
            raise GraphError("duplicate edges are not allowed")

        both = np.concatenate([arr, arr[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(both[:, 0], minlength=n), out=indptr[1:])

        self.n = int(n)
        self.edges = arr
        self.indptr = indptr
        self.indices = np.ascontiguousarray(both[:, 1])
        self._adj: list[list[int]] | None = None
        self._connected: bool | None = None
        for a in (self.edges, self.indptr, self.indices):
            a.setflags(write=False)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def adjacency(self) -> list[list[int]]:
        """Per-vertex neighbor lists as plain Python lists (cached)."""
        if self._adj is None:
            ind = self.indices.tolist()
            ptr = self.indptr.tolist()
            self._adj = [ind[ptr[v]:ptr[v + 1]] for v in range(self.n)]
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def is_connected(self) -> bool:
        if self._connected is None:
            self._connected = self.n <= 1 or _bfs_order(self.indptr, self.indices, 0)[0].size == self.n
        return self._connected

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the old ids."""
        verts = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(verts)}
        adj = self.adjacency
        edges = [(pos[u], pos[w]) for u in verts for w in adj[u] if w in pos and u < w]
        return Graph(len(verts), edges), verts

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.m})"


class Tree(Graph):
    """A connected acyclic graph with an optional designated root."""

    __slots__ = ("root",)

    def __init__(self, n: int, edges: Iterable[Sequence[int]] | np.ndarray = (), root: int | None = None):
        super().__init__(n, edges)
        if n < 1:
            raise GraphError("a tree needs at least one vertex")
        if self.m != n - 1 or not self.is_connected():
            raise GraphError(f"not a tree: n={n}, m={self.m}")
        if root is not None and not 0 <= root < n:
            raise GraphError(f"root {root} outside 0..{n - 1}")
        self.root = root

    @classmethod
    def from_graph(cls, g: Graph, root: int | None = None) -> Tree:
        if isinstance(g, Tree) and root is None:
            return g
        return cls(g.n, g.edges, root=root)

    def rooted(self, root: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """BFS order from the root (parents before children) and parent array (-1 at root)."""
        r = self.root if root is None else root
        r = 0 if r is None else r
        return _bfs_order(self.indptr, self.indices, r)


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and g.is_connected()


def is_path(g: Graph) -> bool:
    if g.n == 1:
        return True
    if not is_tree(g):
        return False
    deg = g.degrees()
    return int(deg.max()) <= 2


def path_order(g: Graph) -> list[int]:
    """Vertices of a path graph in path order, starting from the smaller endpoint."""
    if not is_path(g):
        raise GraphError("graph is not a path")
    if g.n == 1:
        return [0]
    deg = g.degrees()
    start = int(np.flatnonzero(deg == 1)[0])
    adj = g.adjacency
    out = [start]
    prev, cur = -1, start
    while len(out) < g.n:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][-1]
        out.append(nxt)
        prev, cur = cur, nxt
    return out


def bfs_distances(g: Graph, source: int, within: Iterable[int] | None = None) -> dict[int, int]:
    """Hop distances from ``source`` inside the subgraph induced by ``within``.

    Vertices of ``within`` that cannot be reached are absent from the result.
    """
    allowed = None if within is None else (within if isinstance(within, (set, frozenset)) else set(within))
    if allowed is not None and source not in allowed:
        raise GraphError(f"source {source} is not in the coalition")
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} outside 0..{g.n - 1}")
    adj = g.adjacency
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = du
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    """Exact diameter via BFS from every vertex."""
    if not g.is_connected():
        raise GraphError("diameter of a disconnected graph is infinite")
    return max((max(bfs_distances(g, s).values()) for s in range(g.n)), default=0)


def is_connected_induced(g: Graph, c: Iterable[int]) -> bool:
    cs = frozenset(c)
    if not cs:
        raise GraphError("empty coalition")
    return len(bfs_distances(g, next(iter(cs)), cs)) == len(cs)


def components(g: Graph, c: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of the subgraph induced by ``c``."""
    rest = set(c)
    out = []
    while rest:
        comp = frozenset(bfs_distances(g, min(rest), rest))
        out.append(comp)
        rest -= comp
    return out


# -- edge-list text format ---------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; ``#`` lines are comments."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            rows.append((lineno, [int(p) for p in parts]))
        except ValueError:
            raise GraphError(f"line {lineno}: expected integers, got {raw!r}") from None
    if not rows:
        raise GraphError("empty graph file")
    lineno, header = rows[0]
    if len(header) != 2:
        raise GraphError(f"line {lineno}: header must be 'n m'")
    n, m = header
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges, found {len(body)}")
    for lineno, pair in body:
        if len(pair) != 2:
            raise GraphError(f"line {lineno}: expected 'u v'")
    return Graph(n, [pair for _, pair in body])


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))

