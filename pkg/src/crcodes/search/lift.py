"""Dimension-by-dimension classification of codes with prescribed weights.

If ``C`` is an ``[n, j+1]_q`` code whose nonzero weights lie in ``W`` and
``V`` is a column of ``C`` of largest multiplicity, the codewords vanishing
at ``V`` form a ``j``-dimensional subcode ``D`` with the same weight
property and more zero columns.  Conversely ``C = D + <v>``: in coordinates
adapted to ``D`` every column ``P`` of ``D`` becomes ``(P, t)`` for some
lift ``t`` in ``F_q``, and the zero columns of ``D`` become ``V = (0,..,0,1)``
or stay zero.  So every code arises by lifting a representative of some
class one level down, and one representative per equivalence class is kept
at every level (canonical forms from nauty on the point/hyperplane
incidence graph; for prime ``q`` its color-preserving automorphisms are
exactly ``PGL``).

A lift only has to be checked on the ``q^j`` hyperplanes not through ``V``;
the others are hyperplanes of ``D``.  Shears ``v -> v + d`` (``d`` in ``D``)
do not change ``C``, which lets one copy of each of ``j`` independent
points of ``D`` take lift 0.  Because ``V`` has the largest multiplicity,
no lifted point may occur more often than ``V``.
"""

from __future__ import annotations

import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from ..errors import GuardError
from ..gf import FieldMatrix, all_vectors, rank

log = logging.getLogger(__name__)

LIFT_PRUNES = ("capacity", "reach", "spectrum_sum", "isomorph")
_BIG = 1 << 40
OUT_CAP = 1 << 16


@dataclass(frozen=True)
class ProjectiveCode:
    """Column multiset of a code: normalized points with multiplicities, plus zero columns."""

    q: int
    points: tuple[tuple[int, ...], ...]
    mults: tuple[int, ...]
    zeros: int

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def length(self) -> int:
        return sum(self.mults) + self.zeros

    def generator(self) -> FieldMatrix:
        cols = [p for p, m in zip(self.points, self.mults) for _ in range(m)]
        G = np.array(cols, dtype=np.int64).T
        G = np.concatenate([G, np.zeros((self.dim, self.zeros), dtype=np.int64)], axis=1)
        return FieldMatrix(self.q, G)

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points], "mults": list(self.mults), "zeros": self.zeros}

    @classmethod
    def from_json(cls, q: int, d: dict) -> "ProjectiveCode":
        return cls(q, tuple(tuple(p) for p in d["points"]), tuple(d["mults"]), d["zeros"])


def _normalize(v, q: int) -> tuple[int, ...] | None:
    for x in v:
        if x % q:
            inv = pow(int(x), -1, q)
            return tuple(int(y) * inv % q for y in v)
    return None


def _code_from_columns(q: int, cols: dict, zeros: int) -> ProjectiveCode:
    items = sorted(cols.items())
    return ProjectiveCode(q, tuple(p for p, _ in items), tuple(m for _, m in items), zeros)


# --- canonical forms ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _incidence(dim: int, q: int):
    from .projective import build_projective_space

    space = build_projective_space(dim, q)
    N = space.size
    adj = {p: [N + int(h) for h in space.on_hyperplanes[p]] for p in range(N)}
    return space, adj


@lru_cache(maxsize=None)
def _gl(dim: int, q: int) -> tuple[np.ndarray, ...]:
    mats = []
    for flat in itertools.product(range(q), repeat=dim * dim):
        A = np.array(flat, dtype=np.int64).reshape(dim, dim)
        if rank(FieldMatrix(q, A)) == dim:
            mats.append(A)
    return tuple(mats)


def canonical_key(code: ProjectiveCode):
    """Equal keys iff the codes are equivalent (monomially, i.e. their multisets under PGL)."""
    q, dim = code.q, code.dim
    if dim <= 2:
        # the incidence graph of a projective line is too symmetric; use the group directly
        P = np.array(code.points, dtype=np.int64)
        best = None
        for A in _gl(dim, q):
            img = tuple(sorted((_normalize((A @ p) % q, q), m) for p, m in zip(P, code.mults)))
            if best is None or img < best:
                best = img
        return (dim, code.zeros, best)
    import pynauty

    space, adj = _incidence(dim, q)
    N = space.size
    by_mult: dict[int, set[int]] = {}
    for p, m in zip(code.points, code.mults):
        by_mult.setdefault(m, set()).add(space.index(np.array(p)))
    used = set().union(*by_mult.values())
    mults = sorted(by_mult)
    coloring = [set(range(N)) - used] + [by_mult[m] for m in mults] + [set(range(N, 2 * N))]
    coloring = [c for c in coloring if c]
    g = pynauty.Graph(2 * N, adjacency_dict=adj, vertex_coloring=coloring)
    sizes = tuple(len(by_mult[m]) for m in mults)
    return (dim, code.zeros, tuple(mults), sizes, pynauty.certificate(g))


# --- the lifting kernel ------------------------------------------------------------------


@njit(cache=True)
def _lift_dfs(negval, comps, comp_off, comp_cnt, rem, next_allowed, prev_allowed, amax, per_point, out, limit):
    """Enumerate one composition per point so that every hyperplane count is allowed.

    ``negval[i, f]`` is the lift of point ``i`` lying on hyperplane ``f``;
    ``rem[i]`` is the multiplicity still to place from point ``i`` on.
    Returns (nodes, leaves, prunes[3]).
    """
    s = negval.shape[0]
    nf = negval.shape[1]
    counts = np.zeros(nf, np.int64)
    choice = np.empty(s, np.int64)
    prunes = np.zeros(3, np.int64)
    nodes = 0
    found = 0
    i = 0
    choice[0] = comp_off[0] - 1
    while i >= 0:
        c = choice[i]
        if c >= comp_off[i]:
            for f in range(nf):
                counts[f] -= comps[c, negval[i, f]]
        c += 1
        if c >= comp_off[i] + comp_cnt[i]:
            i -= 1
            continue
        choice[i] = c
        nodes += 1
        for f in range(nf):
            counts[f] += comps[c, negval[i, f]]
        R = rem[i + 1]
        reason = -1
        sneed = 0
        sup = 0
        for f in range(nf):
            v = counts[f]
            if v > amax:
                reason = 0
                break
            nd = next_allowed[v] - v
            if nd > R:
                reason = 1
                break
            sneed += nd
            t = v + R
            if t > amax:
                t = amax
            sup += prev_allowed[t] - v
        if reason < 0 and (sneed > per_point * R or sup < per_point * R):
            reason = 2
        if reason >= 0:
            prunes[reason] += 1
            continue
        if i == s - 1:
            if found < out.shape[0]:
                for l in range(s):
                    out[found, l] = choice[l]
            found += 1
            if limit > 0 and found >= limit:
                break
            continue
        i += 1
        choice[i] = comp_off[i] - 1
    return nodes, found, prunes


def _compositions(m: int, q: int, cap: int) -> list[tuple[int, ...]]:
    out = []
    for head in itertools.product(range(min(m, cap) + 1), repeat=q - 1):
        last = m - sum(head)
        if 0 <= last <= cap:
            out.append(head + (last,))
    return out


def _allowed_tables(counts: list[int], n: int):
    size = n + 2
    nxt = np.full(size, _BIG, dtype=np.int64)
    prv = np.full(size, -_BIG, dtype=np.int64)
    for c in range(size):
        ge = [a for a in counts if a >= c]
        le = [a for a in counts if a <= c]
        if ge:
            nxt[c] = ge[0]
        if le:
            prv[c] = le[-1]
    return nxt, prv


def extend(code: ProjectiveCode, n: int, weights, min_zeros: int, exact_zeros: int | None = None):
    """All lifts of ``code`` one dimension up (not yet reduced by equivalence).

    Returns ``(children, stats)``; children keep at least ``min_zeros`` zero
    columns (exactly ``exact_zeros`` if given).
    """
    q, j = code.q, code.dim
    P = np.array(code.points, dtype=np.int64)
    s = len(code.points)
    F = all_vectors(q, j)
    negval = ((-(F @ P.T).T) % q).astype(np.int64)  # (s, q^j)
    basis: list[int] = []
    for i in range(s):
        if rank(FieldMatrix(q, P[basis + [i]])) == len(basis) + 1:
            basis.append(i)
        if len(basis) == j:
            break
    order = basis + sorted((i for i in range(s) if i not in basis), key=lambda i: (-code.mults[i], i))
    mults = np.array([code.mults[i] for i in order], dtype=np.int64)
    rem = np.concatenate([np.cumsum(mults[::-1])[::-1], [0]]).astype(np.int64)
    stats = {"nodes": 0, "prunes": dict.fromkeys(LIFT_PRUNES[:3], 0)}
    children = []
    for zv in range(1, code.zeros + 1):
        zc = code.zeros - zv
        if zc < min_zeros or (exact_zeros is not None and zc != exact_zeros):
            continue
        allowed = sorted({n - zc - w for w in weights if n - zc - w >= 0})
        if not allowed:
            continue
        comps, off, cnt = [], [], []
        for pos, i in enumerate(order):
            cs = _compositions(code.mults[i], q, zv)
            if pos < len(basis):
                cs = [c for c in cs if c[0] >= 1]
            off.append(len(comps))
            cnt.append(len(cs))
            comps.extend(cs)
        if 0 in cnt:
            continue
        comps_arr = np.array(comps, dtype=np.int64)
        nxt, prv = _allowed_tables(allowed, n)
        args = (
            negval[order],
            comps_arr,
            np.array(off, dtype=np.int64),
            np.array(cnt, dtype=np.int64),
            rem,
            nxt,
            prv,
            allowed[-1],
            q ** (j - 1),
        )
        out = np.zeros((OUT_CAP, s), dtype=np.int64)
        nodes, found, prunes = _lift_dfs(*args, out, 0)
        if found > OUT_CAP:
            out = np.zeros((found, s), dtype=np.int64)
            nodes, found, prunes = _lift_dfs(*args, out, 0)
        stats["nodes"] += int(nodes)
        for name, x in zip(LIFT_PRUNES, prunes):
            stats["prunes"][name] += int(x)
        V = (0,) * j + (1,)
        for row in out[:found]:
            cols: dict[tuple[int, ...], int] = {V: zv}
            for pos, i in enumerate(order):
                comp = comps_arr[row[pos]]
                for t in range(q):
                    if comp[t]:
                        cols[code.points[i] + (t,)] = int(comp[t])
            children.append(_code_from_columns(q, cols, zc))
    return children, stats


def initial_codes(q: int, n: int, k: int, weights) -> list[ProjectiveCode]:
    """One-dimensional codes: a single word of weight ``w``."""
    return [ProjectiveCode(q, ((1,),), (w,), n - w) for w in sorted(weights) if n - w >= k - 1]


def _extend_task(args):
    code_json, q, n, weights, min_zeros, exact = args
    code = ProjectiveCode.from_json(q, code_json)
    children, stats = extend(code, n, weights, min_zeros, exact)
    return [(canonical_key(c), c.to_json()) for c in children], stats


def classify(problem, options, ckpt) -> tuple[list[ProjectiveCode], dict]:
    """Representatives of every class of ``[n, k]_q`` codes with weights in ``W``.

    Progress is stored in ``ckpt.state`` after every extended representative.
    """
    q, n, k = problem.q, problem.n, problem.k
    weights = sorted(problem.weights)
    state = ckpt.state
    if "lift" not in state:
        state["lift"] = {
            "dim": 1,
            "level": [c.to_json() for c in initial_codes(q, n, k, weights)],
            "next": 0,
            "children": [],
            "levels": [],
            "nodes": 0,
            "prunes": dict.fromkeys(LIFT_PRUNES, 0),
        }
    ls = state["lift"]
    t0 = time.perf_counter()
    last_save = t0
    processed = 0
    while ls["dim"] < k:
        dim = ls["dim"]
        final = dim + 1 == k
        min_zeros = k - dim - 1
        exact = None if (options.allow_zero_columns or not final) else 0
        seen = {}
        for cj in ls["children"]:
            c = ProjectiveCode.from_json(q, cj)
            seen[canonical_key(c)] = cj
        level = ls["level"]
        tasks = [(level[i], q, n, weights, min_zeros, exact) for i in range(ls["next"], len(level))]
        results = _run_tasks(tasks, options.workers)
        try:
            for keyed, st in results:
                ls["nodes"] += st["nodes"]
                for name, x in st["prunes"].items():
                    ls["prunes"][name] += x
                for key, cj in keyed:
                    if key in seen:
                        ls["prunes"]["isomorph"] += 1
                    else:
                        seen[key] = cj
                        ls["children"].append(cj)
                ls["next"] += 1
                processed += 1
                if final and options.limit and len(ls["children"]) >= options.limit:
                    break
                now = time.perf_counter()
                if ckpt.path and now - last_save > options.checkpoint_every:
                    ckpt.save()
                    last_save = now
                if ls["next"] < len(level) and (
                    (options.stop_after is not None and processed >= options.stop_after)
                    or (options.time_limit is not None and now - t0 > options.time_limit)
                ):
                    from .engine import _Stop

                    raise _Stop()
        finally:
            results.close()
        log.info("dimension %d: %d classes", dim + 1, len(ls["children"]))
        ls["levels"].append({"dim": dim + 1, "classes": len(ls["children"])})
        ls.update(dim=dim + 1, level=ls["children"], next=0, children=[])
        if not ls["level"]:
            break
    if ls["dim"] < k:
        return [], ls
    codes = [ProjectiveCode.from_json(q, cj) for cj in ls["level"]]
    if not options.allow_zero_columns:
        codes = [c for c in codes if c.zeros == 0]
    return codes, ls


def _run_tasks(tasks, workers: int):
    if workers <= 1 or len(tasks) < 2:
        for t in tasks:
            yield _extend_task(t)
        return
    pool = ProcessPoolExecutor(max_workers=workers)
    try:
        yield from pool.map(_extend_task, tasks)
    finally:
        pool.shutdown(wait=False, cancel_futures=True)


def lift_guard(problem, guard: int) -> None:
    if problem.q ** problem.k > guard:
        raise GuardError(f"q^k = {problem.q ** problem.k} exceeds the search guard {guard}")


def codes_json(codes) -> str:
    return json.dumps([c.to_json() for c in codes], sort_keys=True)


def from_generator(G: FieldMatrix) -> ProjectiveCode:
    """Column multiset of a generator matrix."""
    cols: dict[tuple[int, ...], int] = {}
    zeros = 0
    for col in G.data.T:
        p = _normalize(col, G.p)
        if p is None:
            zeros += 1
        else:
            cols[p] = cols.get(p, 0) + 1
    return _code_from_columns(G.p, cols, zeros)
