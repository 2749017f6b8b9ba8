"""Exhaustive search for linear codes whose nonzero weights lie in a given set.

Equivalence handling: the columns of a spanning multiset contain a basis,
and GL(k, q) maps any ordered basis to ``e_1..e_k``, so those columns are
fixed.  The rest is a nondecreasing sequence of point indices, made
lexicographically minimal under the monomial matrices (which permute the
``e_i``) for the first ``sym_depth`` entries.  The rank bound of the pruning
rules is vacuous here: the forced basis already spans.

The search tree is cut at ``split_depth``; the nodes at that depth
(the *frontier*) are independent subtrees, processed in index order.  The
number of finished subtrees is all a checkpoint needs to resume.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import signal
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import GuardError, ParameterError, SearchInterrupted
from ..gf import FieldMatrix, all_vectors, is_prime, rref
from . import kernel
from .projective import SPACE_GUARD, ProjectiveSpace, build_projective_space, spectrum_weights

log = logging.getLogger(__name__)

METHODS = ("columns", "lift")
ORACLE_GUARD = 2**24
VERIFY_GUARD = 2**24
_BIG = 1 << 40


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CRCODES_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SearchProblem:
    q: int
    n: int
    k: int
    weights: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "weights", frozenset(int(w) for w in self.weights))
        if not is_prime(self.q):
            raise ParameterError(f"q = {self.q} must be prime")
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if not self.weights or min(self.weights) < 1 or max(self.weights) > self.n:
            raise ParameterError(f"weights must be a nonempty subset of 1..{self.n}")

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k, "weights": sorted(self.weights)}

    @classmethod
    def from_json(cls, d: dict) -> "SearchProblem":
        try:
            return cls(int(d["q"]), int(d["n"]), int(d["k"]), frozenset(d["weights"]))
        except KeyError as exc:
            raise ParameterError(f"search problem lacks {exc}") from None

    def __str__(self) -> str:
        return f"[{self.n},{self.k}]_{self.q} weights {sorted(self.weights)}"


@dataclass
class SearchOptions:
    limit: int = 0  # stop after this many certificates; 0 = exhaust the tree
    workers: int = field(default_factory=default_workers)
    checkpoint: str | None = None
    split_depth: int = 2
    sym_depth: int = 4
    allow_zero_columns: bool = False
    max_certificates: int = 1000  # stored per run when limit == 0
    stop_after: int | None = None  # subtrees to process in this call before checkpointing
    time_limit: float | None = None
    checkpoint_every: float = 30.0
    guard: int = SPACE_GUARD
    method: str = "columns"  # "columns" (column-by-column tree) or "lift" (dimension by dimension)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown search method {self.method!r}; expected one of {', '.join(METHODS)}")

    def fingerprint(self) -> dict:
        """Options that change the tree; they must match on resume."""
        return {
            "method": self.method,
            "limit": self.limit,
            "split_depth": self.split_depth,
            "sym_depth": self.sym_depth,
            "allow_zero_columns": self.allow_zero_columns,
            "max_certificates": self.max_certificates,
        }


def _empty_stats() -> dict:
    return {
        "nodes": 0,
        "max_depth": 0,
        "prunes": {name: 0 for name in kernel.PRUNE_NAMES},
        "frontier": 0,
        "subtrees": 0,
        "solutions": 0,
    }


def _add_stats(acc: dict, raw: np.ndarray, k: int) -> None:
    acc["nodes"] += int(raw[kernel.ST_NODES])
    if raw[kernel.ST_MAX_DEPTH]:
        acc["max_depth"] = max(acc["max_depth"], k + int(raw[kernel.ST_MAX_DEPTH]))
    for i, name in enumerate(kernel.PRUNE_NAMES):
        acc["prunes"][name] += int(raw[kernel.ST_PRUNE0 + i])


@dataclass
class SearchOutcome:
    problem: SearchProblem
    status: str  # "found" | "none"
    certificates: list[FieldMatrix]
    stats: dict
    seconds: float = 0.0

    def to_json(self, include_certificates: bool = True) -> dict:
        out = {"status": self.status, "problem": self.problem.to_json(), **self.stats, "seconds": round(self.seconds, 3)}
        if include_certificates:
            out["certificates"] = [format_generator(G) for G in self.certificates]
        return out


def format_generator(G: FieldMatrix) -> str:
    """Generator-matrix text block: header ``q n k`` then one row per line."""
    lines = [f"{G.p} {G.cols} {G.rows}"]
    lines += [" ".join(str(int(x)) for x in row) for row in G.data]
    return "\n".join(lines) + "\n"


# --- independent checks ---------------------------------------------------------------


def code_weights(generator: FieldMatrix, guard: int = VERIFY_GUARD) -> set[int]:
    """Set of nonzero codeword weights by full enumeration."""
    q, k = generator.p, generator.rows
    if q**k > guard:
        raise GuardError(f"q^k = {q**k} exceeds the verification guard {guard}")
    msgs = all_vectors(q, k)[1:]
    words = (msgs @ generator.data) % q
    return set(np.count_nonzero(words, axis=1).tolist())


def verify_code_weights(generator: FieldMatrix, weights: Iterable[int], guard: int = VERIFY_GUARD) -> bool:
    """True iff every nonzero codeword of the row space has weight in ``weights``."""
    return code_weights(generator, guard) <= set(weights)


def exhaustive_small_oracle(
    problem: SearchProblem, allow_zero_columns: bool = False, guard: int = ORACLE_GUARD
) -> SearchOutcome:
    """Brute force over every k-dimensional subspace of F_q^n (one RREF matrix each)."""
    q, n, k = problem.q, problem.n, problem.k
    if q ** (k * n) > guard:
        raise GuardError(f"q^(kn) = {q ** (k * n)} exceeds the oracle guard {guard}")
    t0 = time.perf_counter()
    allowed = problem.weights
    msgs = all_vectors(q, k)[1:]
    found = []
    subspaces = 0
    for pivots in _combinations(n, k):
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, n) if j not in pivots]
        base = np.zeros((k, n), dtype=np.int64)
        for i, pc in enumerate(pivots):
            base[i, pc] = 1
        for values in all_vectors(q, len(free)):
            G = base.copy()
            for (i, j), x in zip(free, values):
                G[i, j] = x
            subspaces += 1
            if not allow_zero_columns and not G.any(axis=0).all():
                continue
            weights = np.count_nonzero((msgs @ G) % q, axis=1)
            if set(weights.tolist()) <= allowed:
                found.append(FieldMatrix(q, G))
    stats = {"subspaces": subspaces, "solutions": len(found)}
    return SearchOutcome(problem, "found" if found else "none", found, stats, time.perf_counter() - t0)


def _combinations(n: int, k: int):
    from itertools import combinations

    return combinations(range(n), k)


# --- the search ------------------------------------------------------------------------------


class _Phase:
    """All kernel inputs for one effective length (number of nonzero columns)."""

    def __init__(self, space: ProjectiveSpace, length: int, weights: frozenset[int]):
        self.space = space
        self.length = length
        self.k = space.k
        allowed = sorted(length - w for w in weights if w <= length)
        self.allowed = allowed
        self.amax = allowed[-1]
        size = length + 2
        self.next_allowed = np.full(size, _BIG, dtype=np.int64)
        self.prev_allowed = np.full(size, -_BIG, dtype=np.int64)
        for c in range(size):
            ge = [a for a in allowed if a >= c]
            le = [a for a in allowed if a <= c]
            if ge:
                self.next_allowed[c] = ge[0]
            if le:
                self.prev_allowed[c] = le[-1]
        self.on_h = np.ascontiguousarray(space.on_hyperplanes, dtype=np.int64)
        self.last = np.ascontiguousarray(space.last_point, dtype=np.int64)
        self.by_last = np.argsort(self.last, kind="stable").astype(np.int64)
        self.units = space.unit_points()
        self.counts0 = space.hyperplane_counts(self.units)
        self.mult0 = np.zeros(space.size, dtype=np.int64)
        self.mult0[self.units] += 1
        self.total = length - self.k

    def fixed_ok(self) -> bool:
        """Whether ``e_1..e_k`` alone respect the count ceiling."""
        return bool((self.counts0 <= self.amax).all())

    def state_for(self, prefix: np.ndarray):
        counts = self.counts0.copy()
        mult = self.mult0.copy()
        for p in prefix:
            counts[self.on_h[p]] += 1
            mult[p] += 1
        return counts, mult

    def run(self, prefix: np.ndarray, goal: int, group: np.ndarray, sym_depth: int, limit: int, cap: int):
        counts, mult = self.state_for(prefix)
        out = np.zeros((cap, max(goal, 1)), dtype=np.int64)
        raw, stored = kernel.extend(
            self.on_h,
            self.last,
            self.by_last,
            self.next_allowed,
            self.prev_allowed,
            self.amax,
            counts,
            mult,
            np.asarray(prefix, dtype=np.int64),
            goal,
            self.total,
            group,
            sym_depth,
            limit,
            out,
        )
        return raw, out[:stored, :goal]

    def columns(self, seq: Sequence[int]) -> list[int]:
        return list(self.units) + [int(x) for x in seq]


# worker-process globals, set by _init_worker
_W: dict = {}


def _init_worker(k, q, guard, length, weights, sym_depth, limit, cap):
    signal.signal(signal.SIGINT, signal.SIG_IGN)
    space = build_projective_space(k, q, guard)
    _W.update(
        phase=_Phase(space, length, frozenset(weights)),
        group=space.frame_stabilizer(),
        sym_depth=sym_depth,
        limit=limit,
        cap=cap,
    )


def _run_subtree(prefix):
    ph = _W["phase"]
    raw, sols = ph.run(np.asarray(prefix, dtype=np.int64), ph.total, _W["group"], _W["sym_depth"], _W["limit"], _W["cap"])
    return raw, sols


class _Checkpoint:
    def __init__(self, path: str | None, problem: SearchProblem, options: SearchOptions):
        self.path = path
        self.header = {"version": 1, "problem": problem.to_json(), "options": options.fingerprint()}
        self.state = {"phases": {}, "stats": _empty_stats(), "solutions": [], "complete": False}
        if path and Path(path).exists():
            with open(path) as fh:
                saved = json.load(fh)
            if {k: saved.get(k) for k in self.header} != self.header:
                raise ParameterError(f"checkpoint {path} belongs to a different problem or options")
            self.state = saved["state"]

    def phase(self, length: int) -> dict:
        return self.state["phases"].setdefault(str(length), {"done": 0, "complete": False, "frontier_digest": None})

    def save(self) -> None:
        if not self.path:
            return
        tmp = f"{self.path}.tmp"
        with open(tmp, "w") as fh:
            json.dump({**self.header, "state": self.state}, fh, sort_keys=True)
        os.replace(tmp, self.path)


def _digest(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr, dtype=np.int64).tobytes()).hexdigest()[:16]


def search(problem: SearchProblem, options: SearchOptions | None = None) -> SearchOutcome:
    """Find ``[n, k]_q`` codes (no zero columns unless allowed) with nonzero weights in ``W``.

    Status ``none`` is reported only after the whole tree is exhausted.
    Raises :class:`SearchInterrupted` (frontier checkpointed when a path is
    configured) on Ctrl-C, ``stop_after`` or ``time_limit``.
    """
    options = options or SearchOptions()
    t0 = time.perf_counter()
    q, n, k = problem.q, problem.n, problem.k
    if q**k > options.guard:
        raise GuardError(f"q^k = {q**k} exceeds the search guard {options.guard}")
    ckpt = _Checkpoint(options.checkpoint, problem, options)
    if options.method == "lift":
        return _search_lift(problem, options, ckpt, t0)
    stats = ckpt.state["stats"]
    solutions: list[list[int]] = ckpt.state["solutions"]  # full column lists incl. zero padding marker
    lengths = range(n, k - 1, -1) if options.allow_zero_columns else [n]
    limit = options.limit
    processed = 0

    def limit_hit() -> bool:
        return limit > 0 and stats["solutions"] >= limit

    if not ckpt.state["complete"] and k == 1:
        # one projective point; every codeword of the repetition code has weight = length
        for length in lengths:
            if length in problem.weights and not limit_hit():
                stats["solutions"] += 1
                solutions.append([0] * length)
        ckpt.state["complete"] = True
    elif not ckpt.state["complete"]:
        space = build_projective_space(k, q, options.guard)
        group = space.frame_stabilizer()
        for length in lengths:
            if limit_hit():
                break
            pstate = ckpt.phase(length)
            if pstate["complete"] or length < k or not any(w <= length for w in problem.weights):
                continue
            ph = _Phase(space, length, problem.weights)
            if not ph.fixed_ok():
                pstate["complete"] = True
                continue
            if ph.total == 0:
                if all(ph.next_allowed[c] == c for c in ph.counts0):
                    stats["solutions"] += 1
                    solutions.append(ph.columns([]))
                pstate["complete"] = True
                continue
            split = max(1, min(options.split_depth, ph.total))
            cap = math.comb(space.size + split - 1, split)
            if split == ph.total:
                raw, sols = ph.run(np.zeros(0, np.int64), split, group, options.sym_depth, limit, min(cap, options.max_certificates if limit == 0 else limit))
                if pstate["done"] == 0:
                    _add_stats(stats, raw, k)
                    stats["solutions"] += int(raw[kernel.ST_LEAVES])
                    solutions.extend(ph.columns(s) for s in sols.tolist())
                pstate["complete"] = True
                continue
            raw, frontier = ph.run(np.zeros(0, np.int64), split, group, options.sym_depth, 0, min(cap, 1 << 16))
            if raw[kernel.ST_LEAVES] > len(frontier):
                raw, frontier = ph.run(np.zeros(0, np.int64), split, group, options.sym_depth, 0, int(raw[kernel.ST_LEAVES]))
            digest = _digest(frontier)
            if pstate["frontier_digest"] not in (None, digest):
                raise ParameterError("checkpoint frontier does not match this build's search tree")
            if pstate["frontier_digest"] is None:
                pstate["frontier_digest"] = digest
                _add_stats(stats, raw, k)
                stats["frontier"] += len(frontier)
            todo = frontier[pstate["done"] :]
            log.info("phase n=%d: %d frontier nodes, %d to do", length, len(frontier), len(todo))
            per_cap = options.max_certificates if limit == 0 else limit
            results = _subtree_results(ph, todo, group, options, per_cap, k, q, length, problem)
            last_save = time.perf_counter()
            try:
                for raw, sols in results:
                    _add_stats(stats, raw, k)
                    found = int(raw[kernel.ST_LEAVES])
                    stats["solutions"] += found
                    room = options.max_certificates - len(solutions)
                    if limit > 0:
                        room = min(room, limit - (stats["solutions"] - found))
                    solutions.extend(ph.columns(s) for s in sols.tolist()[: max(room, 0)])
                    stats["subtrees"] += 1
                    pstate["done"] += 1
                    processed += 1
                    if limit_hit():
                        break
                    now = time.perf_counter()
                    if ckpt.path and now - last_save > options.checkpoint_every:
                        ckpt.save()
                        last_save = now
                    stop = (options.stop_after is not None and processed >= options.stop_after) or (
                        options.time_limit is not None and now - t0 > options.time_limit
                    )
                    if stop and pstate["done"] < len(frontier):
                        raise _Stop()
            except (KeyboardInterrupt, _Stop):
                results.close()
                ckpt.save()
                partial = _outcome(problem, solutions, stats, k, n, t0, "interrupted")
                raise SearchInterrupted(
                    f"search interrupted after {pstate['done']}/{len(frontier)} subtrees of phase n={length}",
                    options.checkpoint,
                    partial,
                ) from None
            results.close()
            pstate["complete"] = True
        ckpt.state["complete"] = True
    if limit > 0:
        stats["solutions"] = min(stats["solutions"], limit)
    ckpt.save()
    status = "found" if stats["solutions"] else "none"
    return _outcome(problem, solutions, stats, k, n, t0, status)


class _Stop(Exception):
    pass


def _search_lift(problem: SearchProblem, options: SearchOptions, ckpt: _Checkpoint, t0: float) -> SearchOutcome:
    from . import lift

    try:
        codes, ls = lift.classify(problem, options, ckpt)
    except (KeyboardInterrupt, _Stop):
        ckpt.save()
        ls = ckpt.state["lift"]
        partial = SearchOutcome(problem, "interrupted", [], _lift_stats(ls, 0), time.perf_counter() - t0)
        raise SearchInterrupted(
            f"search interrupted at dimension {ls['dim'] + 1} after {ls['next']}/{len(ls['level'])} representatives",
            options.checkpoint,
            partial,
        ) from None
    ckpt.state["complete"] = True
    ckpt.save()
    if options.limit > 0:
        codes = codes[: options.limit]
    certs = []
    for code in codes[: options.max_certificates]:
        M = code.generator()
        if not verify_code_weights(M, problem.weights) or rref(M)[1] != problem.k or M.cols != problem.n:
            raise RuntimeError("lifted certificate failed re-verification")
        certs.append(M)
    status = "found" if codes else "none"
    return SearchOutcome(problem, status, certs, _lift_stats(ls, len(codes)), time.perf_counter() - t0)


def _lift_stats(ls: dict, solutions: int) -> dict:
    return {
        "method": "lift",
        "nodes": ls["nodes"],
        "prunes": dict(ls["prunes"]),
        "levels": list(ls["levels"]),
        "solutions": solutions,
    }


def _subtree_results(ph: _Phase, todo: np.ndarray, group, options: SearchOptions, cap: int, k, q, length, problem):
    """Generator of ``(raw_stats, solutions)`` per subtree, in frontier order."""
    if options.workers <= 1 or len(todo) < 2:
        for prefix in todo:
            yield ph.run(prefix, ph.total, group, options.sym_depth, options.limit, cap)
        return
    init = (k, q, options.guard, length, sorted(problem.weights), options.sym_depth, options.limit, cap)
    pool = ProcessPoolExecutor(max_workers=options.workers, initializer=_init_worker, initargs=init)
    try:
        chunk = max(1, min(64, len(todo) // (8 * options.workers)))
        yield from pool.map(_run_subtree, [p.tolist() for p in todo], chunksize=chunk)
    finally:
        pool.shutdown(wait=False, cancel_futures=True)


def _outcome(problem, solutions, stats, k, n, t0, status) -> SearchOutcome:
    space = build_projective_space(k, problem.q, max(SPACE_GUARD, problem.q**k)) if k > 1 else None
    certs = []
    for cols in solutions:
        certs.append(_certificate(problem, space, cols, n))
    return SearchOutcome(problem, status, certs, json.loads(json.dumps(stats)), time.perf_counter() - t0)


def _certificate(problem: SearchProblem, space: ProjectiveSpace | None, cols: list[int], n: int) -> FieldMatrix:
    q, k = problem.q, problem.k
    if space is None:
        G = np.ones((1, len(cols)), dtype=np.int64)
        spectral = {len(cols)}
    else:
        G = space.points[cols].T
        spectral = spectrum_weights(space, cols)
    G = np.concatenate([G, np.zeros((k, n - G.shape[1]), dtype=np.int64)], axis=1)
    M = FieldMatrix(q, G)
    enumerated = code_weights(M)
    if enumerated != spectral - {0} and enumerated != spectral:
        raise RuntimeError(f"spectrum {sorted(spectral)} disagrees with enumeration {sorted(enumerated)}")
    if not enumerated <= problem.weights or rref(M)[1] != k:
        raise RuntimeError(f"certificate failed re-verification: weights {sorted(enumerated)}")
    return M
