"""Simple graphs, distance partitions, equitability and distance-regularity.

Graphs are stored in CSR form (``indptr``/``indices``, neighbors sorted).
Coset graphs use syndromes as mixed-radix integers, so vertex 0 is the code
itself and vertex numbering is deterministic.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .arrays import IntersectionArray
from .code import COSET_GUARD, LinearCode, syndrome_neighbors, syndrome_steps
from .errors import DisconnectedGraphError, GuardError, MultigraphError, ParameterError, ParseError


@dataclass(frozen=True)
class IntegerQuotient:
    """Square integer matrix ``S[i][j]``: neighbors in cell ``j`` of a vertex in cell ``i``."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if any(len(r) != len(m) for r in m):
            raise ParameterError("quotient matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return len(self.matrix)

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.matrix)

    def is_tridiagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self.matrix) for j, v in enumerate(r) if abs(i - j) > 1)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]

    def to_array(self) -> IntersectionArray:
        """Read ``{S01,S12,...;S10,S21,...}`` off a tridiagonal quotient."""
        if not self.is_tridiagonal() or self.size < 2:
            raise ParameterError("only a tridiagonal quotient with >= 2 cells defines an intersection array")
        r = self.size - 1
        return IntersectionArray(
            tuple(self.matrix[i][i + 1] for i in range(r)),
            tuple(self.matrix[i + 1][i] for i in range(r)),
        )


class Graph:
    """Finite simple undirected graph."""

    __slots__ = ("indptr", "indices")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, check: bool = True):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        if check:
            self._validate()

    def _validate(self):
        n = self.order
        for v in range(n):
            nb = self.neighbors(v)
            if nb.size and (nb.min() < 0 or nb.max() >= n):
                raise ParameterError(f"vertex {v} has an out-of-range neighbor")
            if np.any(nb == v):
                raise ParameterError(f"loop at vertex {v}")
            if np.any(np.diff(nb) <= 0):
                raise ParameterError(f"neighbors of {v} are unsorted or duplicated")
        A = self.adjacency()
        if (A != A.T).nnz:
            raise ParameterError("adjacency is not symmetric")

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        lists = [sorted(set(int(x) for x in nb)) for nb in adj]
        if any(len(set(nb)) != len(list(nb)) for nb in adj if isinstance(nb, (list, tuple))):
            raise ParameterError("duplicate neighbors")
        indptr = np.zeros(len(lists) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(nb) for nb in lists])
        indices = np.array([x for nb in lists for x in nb], dtype=np.int64)
        return cls(indptr, indices)

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [set() for _ in range(order)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        return cls.from_adjacency(adj)

    @classmethod
    def from_neighbor_table(cls, table: np.ndarray, check: bool = True) -> "Graph":
        table = np.sort(np.asarray(table, dtype=np.int64), axis=1)
        order, deg = table.shape
        return cls(np.arange(order + 1, dtype=np.int64) * deg, table.ravel(), check=check)

    @property
    def order(self) -> int:
        return len(self.indptr) - 1

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self) -> int | None:
        """Common degree, or ``None`` if the graph is not regular."""
        d = self.degrees()
        return int(d[0]) if d.size and (d == d[0]).all() else None

    def adjacency(self) -> sparse.csr_matrix:
        n = self.order
        data = np.ones(self.indices.size, dtype=np.int64)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def edges(self):
        for v in range(self.order):
            for u in self.neighbors(v):
                if v < u:
                    yield v, int(u)

    def to_adjacency_text(self) -> str:
        lines = []
        for v in range(self.order):
            lines.append(f"{v}: " + " ".join(str(int(u)) for u in self.neighbors(v)))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_adjacency_text(cls, text: str) -> "Graph":
        adj: dict[int, list[int]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, sep, tail = line.partition(":")
            if not sep:
                raise ParseError(f"line {lineno}: expected 'i: j k l ...'")
            try:
                v = int(head)
                adj[v] = [int(x) for x in tail.split()]
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer vertex label") from None
        if sorted(adj) != list(range(len(adj))):
            raise ParseError("vertices must be labelled 0..N-1, one line each")
        try:
            return cls.from_adjacency([adj[v] for v in range(len(adj))])
        except ParameterError as exc:
            raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class Partition:
    cells: np.ndarray  # cell index of each vertex

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        if cells.ndim != 1 or (cells.size and cells.min() < 0):
            raise ParameterError("partition needs one nonnegative cell index per vertex")
        used = np.unique(cells)
        if used.size and (used != np.arange(used.size)).any():
            raise ParameterError("partition cells must be numbered 0..r without gaps")
        object.__setattr__(self, "cells", cells)

    @property
    def count(self) -> int:
        return int(self.cells.max()) + 1 if self.cells.size else 0

    def sizes(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.bincount(self.cells, minlength=self.count))

    def members(self, i: int) -> np.ndarray:
        return np.nonzero(self.cells == i)[0]


# --- coset graphs ---------------------------------------------------------------


def coset_graph(c: LinearCode, guard: int = COSET_GUARD) -> Graph:
    """Coset graph on the ``q^(n-k)`` syndromes of ``c``.

    Requires minimum distance >= 3, checked as: every ``a * h_i`` is nonzero and
    no two coincide (a weight-1 or weight-2 codeword would violate exactly that).
    """
    H = c.parity_check
    p, m = c.q, H.rows
    size = p**m
    if size > guard:
        raise GuardError(f"coset graph would have {size} vertices, guard is {guard}")
    steps = syndrome_steps(H)
    if m == 0 or np.any(~steps.any(axis=1)):
        raise MultigraphError(f"{c} has a codeword of weight 1; its coset graph has loops")
    if len(np.unique(steps, axis=0)) != len(steps):
        raise MultigraphError(f"{c} has a codeword of weight 2; its coset graph has multiple edges")
    table = np.concatenate(
        [syndrome_neighbors(np.arange(s, min(size, s + 4096)), steps, p, m) for s in range(0, size, 4096)]
    )
    return Graph.from_neighbor_table(table, check=False)


# --- distance partitions and equitability -----------------------------------------


def bfs_distances(g: Graph, v: int) -> np.ndarray:
    dist = np.full(g.order, -1, dtype=np.int64)
    dist[v] = 0
    queue = deque([v])
    indptr, indices = g.indptr, g.indices
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in indices[indptr[u] : indptr[u + 1]]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def bfs_distance_partition(g: Graph, v: int = 0) -> Partition:
    dist = bfs_distances(g, v)
    missing = np.nonzero(dist < 0)[0]
    if missing.size:
        raise DisconnectedGraphError(f"vertex {int(missing[0])} is unreachable from {v}")
    return Partition(dist)


@dataclass(frozen=True)
class Violation:
    vertex: int
    cell: int  # the vertex's own cell
    target: int  # the cell whose neighbor count disagrees
    count: int
    expected: int  # count seen by the smallest vertex of the same cell

    def to_json(self) -> dict:
        return dict(vertex=self.vertex, cell=self.cell, target=self.target, count=self.count, expected=self.expected)


@dataclass(frozen=True)
class PartitionCheck:
    quotient: IntegerQuotient | None
    witness: Violation | None

    def __bool__(self) -> bool:
        return self.quotient is not None


def _cell_counts(g: Graph, cells: np.ndarray, ncells: int) -> np.ndarray:
    onehot = sparse.csr_matrix(
        (np.ones(cells.size, dtype=np.int64), (np.arange(cells.size), cells)), shape=(cells.size, ncells)
    )
    return np.asarray((g.adjacency() @ onehot).todense())


def is_equitable(g: Graph, p: Partition) -> PartitionCheck:
    """Quotient matrix if ``p`` is equitable, else the smallest violating vertex."""
    if p.cells.size != g.order:
        raise ParameterError(f"partition covers {p.cells.size} vertices, graph has {g.order}")
    r = p.count
    counts = _cell_counts(g, p.cells, r)
    first = np.full(r, -1, dtype=np.int64)
    # smallest vertex of each cell is the reference row
    for v in range(g.order - 1, -1, -1):
        first[p.cells[v]] = v
    ref = counts[first[p.cells]]
    bad = np.nonzero((counts != ref).any(axis=1))[0]
    if bad.size:
        v = int(bad[0])
        j = int(np.nonzero(counts[v] != ref[v])[0][0])
        return PartitionCheck(None, Violation(v, int(p.cells[v]), j, int(counts[v, j]), int(ref[v, j])))
    return PartitionCheck(IntegerQuotient(tuple(map(tuple, counts[first].tolist()))), None)


# --- distance-regularity -------------------------------------------------------------


@dataclass(frozen=True)
class DRCheck:
    array: IntersectionArray | None
    mode: str
    witness: dict | None = None
    note: str | None = None

    def __bool__(self) -> bool:
        return self.array is not None


_FROM_ZERO_NOTE = "vertex-transitivity assumed: only the partition around vertex 0 was checked"


def _array_from_base(g: Graph, base: int):
    dist = bfs_distances(g, base)
    if (dist < 0).any():
        return None, {"reason": "disconnected", "base": base, "vertex": int(np.nonzero(dist < 0)[0][0])}
    check = is_equitable(g, Partition(dist))
    if not check:
        return None, {"reason": "distance partition not equitable", "base": base, **check.witness.to_json()}
    if check.quotient.size < 2:
        return None, {"reason": "single vertex", "base": base}
    return check.quotient.to_array(), None


def distance_regularity(g: Graph, mode: str = "from-zero") -> DRCheck:
    """Intersection array of ``g`` if distance-regular.

    ``from-zero`` certifies only for vertex-transitive graphs (e.g. coset graphs,
    which are Cayley graphs); ``all-vertices`` checks every base vertex.
    """
    if mode not in ("from-zero", "all-vertices"):
        raise ParameterError(f"unknown mode {mode!r}")
    if g.degree() is None:
        degs = g.degrees()
        v = int(np.nonzero(degs != degs[0])[0][0])
        return DRCheck(None, mode, {"reason": "not regular", "vertex": v, "degree": int(degs[v])})
    array, witness = _array_from_base(g, 0)
    if array is None or mode == "from-zero":
        return DRCheck(array, mode, witness, _FROM_ZERO_NOTE if mode == "from-zero" else None)
    return _all_vertices(g, array)


def _all_vertices(g: Graph, array: IntersectionArray, chunk: int = 256) -> DRCheck:
    A = g.adjacency()
    n = g.order
    D = len(array.b)
    b = np.array(list(array.b) + [0])
    c = np.array([0] + list(array.c))
    for start in range(0, n, chunk):
        sources = np.arange(start, min(n, start + chunk))
        dist = csgraph.shortest_path(A, unweighted=True, indices=sources)
        if np.isinf(dist).any():
            s, v = np.argwhere(np.isinf(dist))[0]
            return DRCheck(None, "all-vertices", {"reason": "disconnected", "base": int(sources[s]), "vertex": int(v)})
        dist = dist.astype(np.int64)
        for row, base in zip(dist, sources):
            if row.max() != D:
                return DRCheck(None, "all-vertices", {"reason": "eccentricity differs", "base": int(base), "eccentricity": int(row.max()), "expected": D})
            up = A @ (row[:, None] == np.arange(1, D + 2)[None, :]).astype(np.int64)
            down = A @ (row[:, None] == np.arange(-1, D)[None, :]).astype(np.int64)
            idx = np.arange(n)
            got_b = up[idx, row]
            got_c = down[idx, row]
            bad = np.nonzero((got_b != b[row]) | (got_c != c[row]))[0]
            if bad.size:
                v = int(bad[0])
                return DRCheck(
                    None,
                    "all-vertices",
                    {
                        "reason": "intersection numbers depend on the base vertex",
                        "base": int(base),
                        "vertex": v,
                        "distance": int(row[v]),
                        "b": int(got_b[v]),
                        "c": int(got_c[v]),
                    },
                )
    return DRCheck(array, "all-vertices")


def completely_regular_check(c: LinearCode, guard: int = COSET_GUARD) -> DRCheck:
    """CR intersection array of ``c`` (min distance >= 3) via its coset graph."""
    return distance_regularity(coset_graph(c, guard), "from-zero")


def diameter(g: Graph, vertex_transitive: bool = False) -> int:
    """Graph diameter; for vertex-transitive graphs one BFS from vertex 0 suffices."""
    if vertex_transitive:
        return int(bfs_distances(g, 0).max())
    dist = csgraph.shortest_path(g.adjacency(), unweighted=True)
    if np.isinf(dist).any():
        raise DisconnectedGraphError("graph is disconnected")
    return int(dist.max())


def graph_summary(g: Graph, dr: DRCheck | None = None, vertex_transitive: bool = False) -> dict:
    out = {"order": g.order, "degree": g.degree(), "diameter": diameter(g, vertex_transitive)}
    if dr is not None:
        out["distance_regular"] = dr.array is not None
        out["array"] = str(dr.array) if dr.array is not None else None
        out["mode"] = dr.mode
        if dr.note:
            out["note"] = dr.note
        if dr.witness:
            out["witness"] = dr.witness
    return out


def summary_json(g: Graph, dr: DRCheck | None = None, vertex_transitive: bool = False) -> str:
    return json.dumps(graph_summary(g, dr, vertex_transitive), sort_keys=True)
