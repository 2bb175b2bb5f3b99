"""Command-line front end: solve, welfare, reduce and bench.

Exit codes: 0 success, 2 malformed input or violated precondition,
3 general graph too large for the exact solver.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numba

from .generators import random_tree
from .graph import (Graph, GraphError, Tree, format_edge_list, is_path, is_tree, path_order, read_edge_list,
                    write_edge_list)
from .oracle import GraphTooLargeError, solve_exact
from .path import solve_path
from .reduction import XsatError, assignment_to_partition, build_gadget, read_xsat, verify_threshold
from .tree import solve_tree
from .welfare import Partition, PartitionError, Solution, coalition_welfare, rational_to_json, utility

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_TOO_LARGE = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _load_graph(path: str) -> Graph:
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(obj, output: str | None) -> None:
    text = json.dumps(obj) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# -- solve ----------------------------------------------------------------------

def _solve_path_graph(g: Graph) -> Solution:
    order = path_order(g)
    sol = solve_path(g.n)
    blocks = [[order[i] for i in b] for b in sol.partition.sorted_blocks()]
    return Solution(Partition(blocks), sol.welfare)


def solve_graph(g: Graph, mode: str, threads: int | None = None) -> tuple[str, Solution]:
    """Dispatch to a solver; ``auto`` tries path, then tree, then the exact oracle."""
    if mode == "auto":
        mode = "path" if is_path(g) else "tree" if is_tree(g) else "exact"
    if mode == "path":
        if not is_path(g):
            raise CliError("mode=path needs a path graph")
        return mode, _solve_path_graph(g)
    if mode == "tree":
        if not is_tree(g):
            raise CliError("mode=tree needs a tree")
        return mode, solve_tree(Tree.from_graph(g))
    try:
        return mode, solve_exact(g, threads=threads)
    except GraphTooLargeError as exc:
        raise CliError(str(exc), EXIT_TOO_LARGE) from None
    except GraphError as exc:
        raise CliError(str(exc)) from None


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    t0 = time.perf_counter()
    mode, sol = solve_graph(g, args.mode, args.threads)
    ms = (time.perf_counter() - t0) * 1000
    _emit({"n": g.n, "mode": mode, "welfare": rational_to_json(sol.welfare),
           "blocks": sol.partition.sorted_blocks(), "runtime_ms": round(ms, 3)}, args.output)
    return EXIT_OK


# -- welfare --------------------------------------------------------------------

def _load_partition(path: str) -> Partition:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(data, dict):
        data = data.get("blocks")
    if not isinstance(data, list) or not all(
            isinstance(b, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in b) for b in data):
        raise CliError(f"{path}: expected a list of integer lists or an object with 'blocks'")
    flat = [v for b in data for v in b]
    if len(flat) != len(set(flat)):
        dup = sorted({v for v in flat if flat.count(v) > 1})
        raise CliError(f"vertices {dup[:10]} appear in more than one block")
    return Partition(data)


def cmd_welfare(args) -> int:
    g = _load_graph(args.graph)
    part = _load_partition(args.partition)
    try:
        part.validate(g.n)
    except PartitionError as exc:
        raise CliError(f"invalid partition: {exc}") from None
    blocks = []
    util: list[Fraction] = [Fraction(0)] * g.n
    total = Fraction(0)
    for b in part.sorted_blocks():
        w = coalition_welfare(g, b)
        total += w
        blocks.append({"members": b, "welfare": rational_to_json(w)})
        for v in b:
            util[v] = utility(g, v, b)
    _emit({"n": g.n, "welfare": rational_to_json(total),
           "average": rational_to_json(total / g.n) if g.n else rational_to_json(Fraction(0)),
           "blocks": blocks, "utilities": [rational_to_json(u) for u in util]}, args.output)
    return EXIT_OK


# -- reduce ---------------------------------------------------------------------

def _parse_assignment(text: str, n: int) -> list[bool]:
    bits = text.replace(",", "").strip()
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise CliError(f"assignment must be {n} characters of 0/1, got {text!r}")
    return [b == "1" for b in bits]


def cmd_reduce(args) -> int:
    try:
        inst = read_xsat(args.instance)
    except OSError as exc:
        raise CliError(f"cannot read {args.instance}: {exc.strerror or exc}") from None
    except XsatError as exc:
        raise CliError(f"{args.instance}: {exc}") from None
    gadget = build_gadget(inst)
    assignment = _parse_assignment(args.assignment, inst.n_vars) if args.assignment else None

    if args.output:
        prefix = Path(args.output)
        write_edge_list(gadget.graph, prefix.with_name(prefix.name + ".edges"))
        prefix.with_name(prefix.name + ".labels.json").write_text(json.dumps(gadget.label_map(), indent=1) + "\n")
    elif not args.verify and assignment is None:
        sys.stdout.write(format_edge_list(gadget.graph))
        return EXIT_OK

    report = {"n_vars": inst.n_vars, "vertices": gadget.graph.n, "edges": gadget.graph.m,
              "threshold": rational_to_json(gadget.threshold())}
    try:
        if args.verify:
            rep = verify_threshold(gadget, threads=args.threads)
            report["mode"] = "exact" if rep.exact else "forward-only"
            report["optimum"] = rational_to_json(rep.optimum) if rep.optimum is not None else None
            report["optimum_blocks"] = rep.optimum_blocks
            report["optimum_equals_threshold"] = rep.optimum_equals_threshold
            if rep.note:
                report["note"] = rep.note
        if assignment is not None:
            part = assignment_to_partition(gadget, assignment)
            w = sum((coalition_welfare(gadget.graph, b) for b in part.blocks), Fraction(0))
            report["assignment_welfare"] = rational_to_json(w)
            report["assignment_blocks"] = part.sorted_blocks()
            report["assignment_certified"] = w == gadget.threshold()
    except XsatError as exc:
        raise CliError(str(exc)) from None
    _emit(report, None)
    return EXIT_OK


# -- bench ----------------------------------------------------------------------

def _parse_sizes(text: str) -> list[int]:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            n = int(float(tok))
        except ValueError:
            raise CliError(f"bad size {tok!r}") from None
        if n < 1:
            raise CliError(f"sizes must be positive, got {n}")
        out.append(n)
    return out


def cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    rows = []
    if sizes:
        solve_tree(random_tree(16, args.seed))  # compile outside the timed region
    for i, n in enumerate(sizes):
        t = random_tree(n, args.seed + i)
        t0 = time.perf_counter()
        solve_tree(t)
        rows.append((n, round((time.perf_counter() - t0) * 1000, 3)))
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "runtime_ms"])
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
    by_n = dict(rows)
    if 10**5 in by_n and 10**6 in by_n and by_n[10**5] > 0:
        ratio = by_n[10**6] / by_n[10**5]
        flag = "near-linear" if ratio <= 15 else "superlinear"
        print(f"runtime(1e6)/runtime(1e5) = {ratio:.2f} ({flag})", file=sys.stderr)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxswp", description="Maximum social welfare partitions of graphs.")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads for the exact oracle (default: all cores)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal partition of an edge-list graph")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("auto", "tree", "path", "exact"), default="auto")
    p.add_argument("--output", help="write the JSON result here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("welfare", help="welfare report for a given partition")
    p.add_argument("graph")
    p.add_argument("partition", help="JSON list of blocks, or an object with a 'blocks' key")
    p.add_argument("--output")
    p.set_defaults(func=cmd_welfare)

    p = sub.add_parser("reduce", help="build the gadget graph of an XSAT instance")
    p.add_argument("instance")
    p.add_argument("--verify", action="store_true", help="compare the optimum with 41n/12")
    p.add_argument("--assignment", help="0/1 string, one character per variable")
    p.add_argument("--output", help="prefix for <prefix>.edges and <prefix>.labels.json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="time the tree solver on random trees")
    p.add_argument("--sizes", default="", help="comma-separated tree sizes, e.g. 1e4,1e5,1e6")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            print("maxswp: --threads must be positive", file=sys.stderr)
            return EXIT_INPUT
        numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
    try:
        return args.func(args)
    except CliError as exc:
        print(f"maxswp: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
