"""Command-line front end: ``crcodes <command> ...``; every command prints one JSON report."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .arrays import IntersectionArray
from .code import (
    COSET_GUARD,
    WD_GUARD,
    LinearCode,
    coset_weight_profile,
    dual_code,
    macwilliams,
    min_distance,
    weight_distribution,
)
from .errors import CRCodesError, GuardError, MergeError, ParseError, SearchInterrupted, ShapeError
from .gf import FieldMatrix, is_prime, rank
from .graph import Graph, Partition, coset_graph, distance_regularity, graph_summary, is_equitable
from .screen import load_annotations, load_fixture_table, merge_cells, quotient_from_array, screen_batch, screen_report

log = logging.getLogger("crcodes")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GUARD = 3
EXIT_INTERRUPTED = 4


# --- file formats --------------------------------------------------------------------


def parse_generator_text(text: str) -> LinearCode:
    """Header ``q n k`` then ``k`` rows of ``n`` residues; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty generator-matrix file")
    try:
        q, n, k = (int(x) for x in lines[0])
    except ValueError:
        raise ParseError(f"header must be 'q n k', got {' '.join(lines[0])!r}") from None
    if not is_prime(q):
        raise ParseError(f"q = {q} is not prime")
    if n < 1 or k < 1 or k > n:
        raise ParseError(f"need 1 <= k <= n, got n={n}, k={k}")
    rows = lines[1:]
    if len(rows) != k:
        raise ParseError(f"expected {k} matrix rows, found {len(rows)}")
    data = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {i} has {len(row)} entries, expected {n}")
        try:
            vals = [int(x) for x in row]
        except ValueError:
            raise ParseError(f"row {i} has a non-integer entry") from None
        if any(v < 0 or v >= q for v in vals):
            raise ParseError(f"row {i} has a residue outside [0, {q})")
        data.append(vals)
    G = FieldMatrix(q, data)
    if rank(G) != k:
        raise ParseError(f"generator matrix has rank {rank(G)} < {k}")
    return LinearCode(G)


def format_generator_text(c: LinearCode) -> str:
    G = c.generator
    out = [f"{c.q} {c.n} {c.k}"] + [" ".join(str(int(x)) for x in row) for row in G.data]
    return "\n".join(out) + "\n"


def parse_partition_text(text: str, order: int) -> Partition:
    """JSON list of cells (vertex lists) or of per-vertex cell indices, or one cell per line."""
    text = text.strip()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = [[int(x) for x in ln.replace(",", " ").split()] for ln in text.splitlines() if ln.strip()]
    if not isinstance(obj, list) or not obj:
        raise ParseError("partition must be a nonempty list")
    if all(isinstance(x, int) for x in obj):
        cells = obj
    else:
        cells = [-1] * order
        for i, cell in enumerate(obj):
            for v in cell:
                if not 0 <= v < order or cells[v] != -1:
                    raise ParseError(f"vertex {v} is out of range or in two cells")
                cells[v] = i
        if -1 in cells:
            raise ParseError(f"vertex {cells.index(-1)} is in no cell")
    if len(cells) != order:
        raise ParseError(f"partition covers {len(cells)} vertices, graph has {order}")
    return Partition(cells)


def parse_grouping(text: str) -> list[list[int]]:
    """``"0,4;1,3;2"`` or JSON ``[[0,4],[1,3],[2]]``."""
    try:
        obj = json.loads(text)
        return [[int(x) for x in g] for g in obj]
    except (json.JSONDecodeError, TypeError):
        try:
            return [[int(x) for x in g.replace(",", " ").split()] for g in text.split(";")]
        except ValueError:
            raise ParseError(f"cannot parse grouping {text!r}") from None


# --- report envelope -----------------------------------------------------------------


def _digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
        h.update(b"\0")
    return h.hexdigest()


def make_report(command: list[str], inputs: list[bytes], result) -> dict:
    return {"command": command, "input_digest": _digest(*inputs), "version": __version__, "result": result}


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


# --- commands --------------------------------------------------------------------------


def cmd_screen(args) -> tuple[list[bytes], object]:
    ann_bytes = _read(args.annotations) if args.annotations else b"builtin"
    annotations = load_annotations(args.annotations)
    if args.batch:
        arrays = load_fixture_table(args.batch)
        result = screen_batch(arrays, annotations, workers=args.workers, w_max=args.w_max)
        return [args.batch.encode(), ann_bytes], result
    if not args.array:
        raise ParseError("give an intersection array or --batch NAME")
    a = IntersectionArray.parse(args.array)
    return [str(a).encode(), ann_bytes], screen_report(a, annotations, args.w_max).to_json()


def cmd_wd(args):
    raw = _read(args.matrix)
    c = parse_generator_text(raw.decode())
    W = weight_distribution(c, args.guard)
    Wd = macwilliams(W, c.n, c.q, c.k)
    result = {
        "q": c.q,
        "n": c.n,
        "k": c.k,
        "wd": str(W),
        "wd_counts": list(W.counts),
        "dual_wd": str(Wd),
        "dual_wd_counts": list(Wd.counts),
        "min_distance": min_distance(c, args.guard),
    }
    if c.n > c.k:
        prof = coset_weight_profile(c, args.coset_guard)
        result["covering_radius"] = prof.covering_radius
        result["coset_weight_counts"] = list(prof.counts)
    else:
        result["covering_radius"] = 0
        result["coset_weight_counts"] = [1]
    if args.dual:
        result["dual_generator"] = format_generator_text(dual_code(c))
    return [raw], result


def cmd_coset_graph(args):
    raw = _read(args.matrix)
    c = parse_generator_text(raw.decode())
    g = coset_graph(c, args.guard)
    dr = distance_regularity(g, args.check_dr) if args.check_dr else None
    # coset graphs are Cayley graphs, hence vertex-transitive
    result = graph_summary(g, dr, vertex_transitive=True)
    if args.export:
        Path(args.export).write_text(g.to_adjacency_text())
        result["exported"] = args.export
    return [raw], result


def _search_problem(args):
    from .search import SearchOptions, SearchProblem

    fields = {}
    if args.problem:
        literal = args.problem.lstrip().startswith("{")
        text = args.problem if literal else _read(args.problem).decode()
        try:
            fields = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad problem JSON: {exc}") from None
        if not isinstance(fields, dict):
            raise ParseError("problem JSON must be an object")
    for key in ("q", "n", "k", "weights", "limit", "workers", "checkpoint", "method"):
        val = getattr(args, key)
        if val is not None:
            fields[key] = val
    missing = [key for key in ("q", "n", "k", "weights") if key not in fields]
    if missing:
        raise ParseError(f"search problem lacks {', '.join(missing)}")
    problem = SearchProblem.from_json(fields)
    options = SearchOptions(
        limit=int(fields.get("limit", 0)),
        checkpoint=fields.get("checkpoint"),
        split_depth=args.split_depth,
        sym_depth=args.sym_depth,
        allow_zero_columns=args.allow_zero_columns,
        time_limit=args.time_limit,
        method=fields.get("method", "columns"),
    )
    if "workers" in fields:
        options.workers = int(fields["workers"])
    return problem, options


def cmd_search(args):
    from .search import search

    problem, options = _search_problem(args)
    digest_input = json.dumps(
        {"problem": problem.to_json(), "options": options.fingerprint()}, sort_keys=True
    ).encode()
    outcome = search(problem, options)
    log.info("search finished in %.2f s", outcome.seconds)
    result = outcome.to_json()
    if not args.timings:
        result.pop("seconds")
    return [digest_input], result


def cmd_verify_partition(args):
    if args.array:
        a = IntersectionArray.parse(args.array)
        S = quotient_from_array(a)
        result = {"array": str(a), "quotient": S.tolist()}
        inputs = [str(a).encode()]
        if args.merge:
            grouping = parse_grouping(args.merge)
            inputs.append(json.dumps(grouping).encode())
            result["grouping"] = grouping
            try:
                M = merge_cells(S, grouping)
                result.update(equitable=True, merged=M.tolist())
                if M.is_tridiagonal():
                    result["merged_array"] = str(M.to_array())
            except MergeError as exc:
                result.update(equitable=False, witness=str(exc))
        return inputs, result
    if not (args.graph and args.partition):
        raise ParseError("give GRAPH and PARTITION files, or --array [--merge]")
    graw, praw = _read(args.graph), _read(args.partition)
    g = Graph.parse_adjacency_text(graw.decode())
    p = parse_partition_text(praw.decode(), g.order)
    check = is_equitable(g, p)
    result = {"order": g.order, "cells": p.count, "equitable": bool(check)}
    if check:
        result["quotient"] = check.quotient.tolist()
    else:
        result["witness"] = check.witness.to_json()
    return [graw, praw], result


# --- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .search.engine import default_workers

    ap = argparse.ArgumentParser(prog="crcodes", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("screen", help="screen an intersection array (or a fixture table)")
    sp.add_argument("array", nargs="?", help='e.g. "{25,24,3;1,3,20}"')
    sp.add_argument("--batch", metavar="NAME", help="shipped fixture table, e.g. bcn14")
    sp.add_argument("--annotations", metavar="PATH", help="annotation JSON (default: shipped file)")
    sp.add_argument("--workers", type=int, default=default_workers())
    sp.add_argument("--w-max", type=int, default=None, help="highest Krawtchouk degree to test (default n)")
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("wd", help="weight distributions and coset profile of a code")
    sp.add_argument("matrix", help="generator-matrix file")
    sp.add_argument("--dual", action="store_true", help="also print a dual generator matrix")
    sp.add_argument("--guard", type=int, default=WD_GUARD)
    sp.add_argument("--coset-guard", type=int, default=COSET_GUARD)
    sp.set_defaults(func=cmd_wd)

    sp = sub.add_parser("coset-graph", help="build the coset graph of a code")
    sp.add_argument("matrix", help="generator-matrix file")
    sp.add_argument(
        "--check-dr", nargs="?", const="from-zero", choices=("from-zero", "all-vertices"), default=None
    )
    sp.add_argument("--export", metavar="PATH", help="write the adjacency list here")
    sp.add_argument("--guard", type=int, default=COSET_GUARD)
    sp.set_defaults(func=cmd_coset_graph)

    sp = sub.add_parser("search", help="exhaustive search for codes with prescribed weights")
    sp.add_argument("problem", nargs="?", help="problem JSON (file path or literal)")
    sp.add_argument("--q", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--weights", type=lambda s: [int(x) for x in s.replace(",", " ").split()])
    sp.add_argument("--limit", type=int, help="stop after this many certificates (0: exhaust)")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--checkpoint", metavar="PATH")
    sp.add_argument(
        "--method",
        choices=("columns", "lift"),
        help="columns: column-by-column tree (default); lift: dimension-by-dimension classification",
    )
    sp.add_argument("--split-depth", type=int, default=2)
    sp.add_argument("--sym-depth", type=int, default=4)
    sp.add_argument("--allow-zero-columns", action="store_true")
    sp.add_argument("--time-limit", type=float, help="seconds; checkpoint and exit 4 when exceeded")
    sp.add_argument("--timings", action="store_true", help="include wall-clock seconds (breaks byte-identity)")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("verify-partition", help="check a partition for equitability")
    sp.add_argument("graph", nargs="?", help="adjacency file ('i: j k ...' per line)")
    sp.add_argument("partition", nargs="?", help="partition file")
    sp.add_argument("--array", help="use the distance quotient of this array instead of a graph")
    sp.add_argument("--merge", help='cell grouping, e.g. "0,4;1,3;2"')
    sp.set_defaults(func=cmd_verify_partition)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        inputs, result = args.func(args)
    except SearchInterrupted as exc:
        print(f"crcodes: {exc}; checkpoint: {exc.checkpoint}", file=sys.stderr)
        return EXIT_INTERRUPTED
    except GuardError as exc:
        print(f"crcodes: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (CRCodesError, ShapeError, ValueError) as exc:
        print(f"crcodes: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(make_report(argv, inputs, result), indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
