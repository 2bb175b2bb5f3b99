"""Monotone exact-1-in-3 SAT (every variable occurring three times) to MaxSWP.

Vertex layout of the gadget for an instance with ``n`` variables and ``n``
clauses (0-based ids throughout):

* literal vertex ``x_i^(j)`` is ``3*i + j`` for ``j`` in 0..2; the ``j``-th
  occurrence of ``x_i`` in clause order is ``x_i^(j)``
* clause vertices ``S_c^(1)``, ``S_c^(2)`` are ``3*n + 2*c`` and ``3*n + 2*c + 1``

Each variable's three literal vertices form a triangle, the two clause vertices
are adjacent, and each occurrence vertex is joined to both clause vertices of
its clause.  The result is 4-regular with ``5n`` vertices and ``10n`` edges.
A satisfying assignment yields welfare ``41n/12``; the welfare of an optimal
partition reaches that value only for satisfiable instances.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph
from .oracle import MAX_EXACT_N, solve_exact
from .welfare import Partition, welfare


class XsatError(ValueError):
    """Malformed instance, bad assignment or violated clause."""


@dataclass(frozen=True)
class XsatInstance:
    """Monotone 3-clauses over variables ``0..n_vars-1``; repeated clauses are allowed."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise XsatError("instance needs at least one variable")
        norm = []
        for idx, clause in enumerate(self.clauses):
            c = tuple(int(x) for x in clause)
            if len(c) != 3:
                raise XsatError(f"clause {idx + 1} has {len(c)} literals, expected 3")
            if len(set(c)) != 3:
                raise XsatError(f"clause {idx + 1} repeats a variable: {[x + 1 for x in c]}")
            bad = [x + 1 for x in c if not 0 <= x < self.n_vars]
            if bad:
                raise XsatError(f"clause {idx + 1} uses unknown variables {bad}")
            norm.append(tuple(sorted(c)))
        counts = Counter(x for c in norm for x in c)
        wrong = [(v + 1, counts.get(v, 0)) for v in range(self.n_vars) if counts.get(v, 0) != 3]
        if wrong:
            v, k = wrong[0]
            raise XsatError(f"variable {v} occurs {k} times, every variable must occur exactly 3 times")
        object.__setattr__(self, "clauses", tuple(norm))

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def violated_clause(self, assignment: Sequence[bool]) -> int | None:
        """Index of the first clause without exactly one true variable, or None."""
        if len(assignment) != self.n_vars:
            raise XsatError(f"assignment has {len(assignment)} values, expected {self.n_vars}")
        for idx, c in enumerate(self.clauses):
            if sum(bool(assignment[x]) for x in c) != 1:
                return idx
        return None

    def is_satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return self.violated_clause(assignment) is None

    def satisfying_assignments(self) -> Iterator[tuple[bool, ...]]:
        """All exact-1 assignments by exhaustive search (small instances only)."""
        for bits in itertools.product((False, True), repeat=self.n_vars):
            if self.violated_clause(bits) is None:
                yield bits

    def is_satisfiable(self) -> bool:
        return next(self.satisfying_assignments(), None) is not None


# -- instance file format: "p xsat n m", then m lines of three 1-based ids -------

def parse_xsat(text: str) -> XsatInstance:
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("#", "c ")) or line == "c":
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "xsat":
                raise XsatError(f"line {lineno}: expected header 'p xsat n m'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise XsatError(f"line {lineno}: header counts must be integers") from None
            continue
        try:
            ids = [int(p) for p in parts]
        except ValueError:
            raise XsatError(f"line {lineno}: expected integers, got {raw!r}") from None
        if len(ids) != 3:
            raise XsatError(f"line {lineno}: a clause has exactly 3 variables")
        clauses.append(tuple(i - 1 for i in ids))
    if header is None:
        raise XsatError("missing header 'p xsat n m'")
    n, m = header
    if len(clauses) != m:
        raise XsatError(f"header declares {m} clauses, found {len(clauses)}")
    return XsatInstance(n, tuple(clauses))


def format_xsat(inst: XsatInstance) -> str:
    lines = [f"p xsat {inst.n_vars} {inst.n_clauses}"]
    lines.extend(" ".join(str(x + 1) for x in c) for c in inst.clauses)
    return "\n".join(lines) + "\n"


def read_xsat(path: str | Path) -> XsatInstance:
    return parse_xsat(Path(path).read_text())


# -- gadget ------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetGraph:
    instance: XsatInstance
    graph: Graph
    literal: np.ndarray       # (n, 3): vertex of x_i^(j)
    clause: np.ndarray        # (n, 2): vertices S_c^(1), S_c^(2)
    occurrence: np.ndarray    # (n, 3): literal vertex used by each clause position
    _names: list[str] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.instance.n_vars

    def label(self, v: int) -> str:
        return self._names[v]

    def label_map(self) -> dict[str, str]:
        """Vertex id (as a string key) to a readable 1-based name such as ``x2^3`` or ``S1^2``."""
        return {str(v): name for v, name in enumerate(self._names)}

    def clause_gadget(self, c: int) -> list[int]:
        return sorted(self.clause[c].tolist() + self.occurrence[c].tolist())

    def threshold(self) -> Fraction:
        return Fraction(41 * self.n, 12)


def build_gadget(inst: XsatInstance) -> GadgetGraph:
    n = inst.n_vars
    literal = np.arange(3 * n, dtype=np.int64).reshape(n, 3)
    clause = (3 * n + np.arange(2 * n, dtype=np.int64)).reshape(n, 2)
    occurrence = np.empty((n, 3), dtype=np.int64)
    seen = [0] * n
    edges = []
    for i in range(n):
        a, b, c = literal[i].tolist()
        edges += [(a, b), (a, c), (b, c)]
    for ci, cl in enumerate(inst.clauses):
        s1, s2 = clause[ci].tolist()
        edges.append((s1, s2))
        for pos, x in enumerate(cl):
            v = int(literal[x, seen[x]])
            seen[x] += 1
            occurrence[ci, pos] = v
            edges += [(v, s1), (v, s2)]
    names = [f"x{i + 1}^{j + 1}" for i in range(n) for j in range(3)]
    names += [f"S{c + 1}^{k + 1}" for c in range(n) for k in range(2)]
    return GadgetGraph(inst, Graph(5 * n, edges), literal, clause, occurrence, names)


def assignment_to_partition(g: GadgetGraph, assignment: Sequence[bool]) -> Partition:
    """True variables become triangles; each clause joins its false occurrences."""
    inst = g.instance
    bad = inst.violated_clause(assignment)
    if bad is not None:
        ids = " ".join(str(x + 1) for x in inst.clauses[bad])
        k = sum(bool(assignment[x]) for x in inst.clauses[bad])
        raise XsatError(f"clause {bad + 1} ({ids}) has {k} true variables, expected exactly 1")
    blocks = [g.literal[i].tolist() for i in range(g.n) if assignment[i]]
    for ci, cl in enumerate(inst.clauses):
        false_occ = [int(g.occurrence[ci, pos]) for pos, x in enumerate(cl) if not assignment[x]]
        blocks.append(g.clause[ci].tolist() + false_occ)
    return Partition(blocks)


@dataclass
class ThresholdReport:
    n: int
    threshold: Fraction
    exact: bool
    optimum: Fraction | None = None
    optimum_blocks: list[list[int]] | None = None
    optimum_equals_threshold: bool | None = None
    assignment_welfare: Fraction | None = None
    assignment_certified: bool | None = None
    note: str = ""


def verify_threshold(g: GadgetGraph, assignment: Sequence[bool] | None = None,
                     threads: int | None = None) -> ThresholdReport:
    """Compare the optimum of the gadget with ``41n/12``.

    Gadgets with at most 20 vertices are solved exactly.  Larger ones fall back
    to certifying ``assignment`` (if given) by its forward partition.
    """
    rep = ThresholdReport(n=g.n, threshold=g.threshold(), exact=g.graph.n <= MAX_EXACT_N)
    if rep.exact:
        sol = solve_exact(g.graph, threads=threads)
        rep.optimum = sol.welfare
        rep.optimum_blocks = sol.partition.sorted_blocks()
        rep.optimum_equals_threshold = sol.welfare == rep.threshold
    else:
        rep.note = (f"gadget has {g.graph.n} vertices, above the exact limit of {MAX_EXACT_N}; "
                    "forward check only")
    if assignment is not None:
        part = assignment_to_partition(g, assignment)
        rep.assignment_welfare = welfare(g.graph, part)
        rep.assignment_certified = rep.assignment_welfare == rep.threshold
    return rep


# -- small-instance enumeration ------------------------------------------------

def enumerate_instances(n: int) -> Iterator[XsatInstance]:
    """Every valid instance on ``n`` variables, one per multiset of clauses."""
    triples = list(itertools.combinations(range(n), 3))
    for combo in itertools.combinations_with_replacement(triples, n):
        counts = Counter(x for c in combo for x in c)
        if all(counts[v] == 3 for v in range(n)):
            yield XsatInstance(n, combo)


def find_unsatisfiable(max_n: int = 4) -> list[XsatInstance]:
    """Valid instances with at most ``max_n`` variables that have no exact-1 assignment."""
    return [inst for n in range(3, max_n + 1) for inst in enumerate_instances(n)
            if not inst.is_satisfiable()]
