"""Linear codes over prime fields.

Weight distributions come from enumerating the message space; coset weights
come from a breadth-first search over syndromes.  The BFS works because a
weight-1 error ``a * e_i`` moves the syndrome by ``a * h_i`` (``h_i`` the
i-th parity-check column), so the weight of a coset equals its distance from
the zero syndrome in the coset graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GuardError, InconsistentDistributionError, ParameterError
from .exactmath import krawtchouk_table
from .gf import FieldMatrix, PrimeField, all_vectors, kernel_basis, prime_power_base, rref

WD_GUARD = 2**32
COSET_GUARD = 2**24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class WeightDistribution:
    """Counts ``W_0..W_n``; ``W_i`` is the number of codewords of weight ``i``."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @classmethod
    def from_compact(cls, n: int, compact: dict[int, int]) -> "WeightDistribution":
        counts = [0] * (n + 1)
        for w, c in compact.items():
            counts[w] = c
        return cls(tuple(counts))

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def compact(self) -> dict[int, int]:
        return {i: c for i, c in enumerate(self.counts) if c}

    def nonzero_weights(self) -> list[int]:
        return [i for i, c in enumerate(self.counts) if c and i]

    def __str__(self) -> str:
        return "{" + ",".join(f"{i}^{c}" for i, c in self.compact().items()) + "}"

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def __iter__(self):
        return iter(self.counts)


@dataclass(frozen=True)
class LinearCode:
    """Row space of a full-rank ``k x n`` generator matrix over F_p."""

    generator: FieldMatrix

    def __post_init__(self):
        if self.generator.rows and rref(self.generator)[1] != self.generator.rows:
            raise ParameterError("generator matrix rows are linearly dependent")

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], n: int | None = None) -> "LinearCode":
        arr = np.array(rows, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, n or 0), dtype=np.int64)
        return cls(FieldMatrix(p, arr))

    @classmethod
    def from_parity_check(cls, H: FieldMatrix) -> "LinearCode":
        return cls(kernel_basis(H))

    @property
    def field(self) -> PrimeField:
        return self.generator.field

    @property
    def p(self) -> int:
        return self.generator.p

    @property
    def q(self) -> int:
        return self.generator.p

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    @cached_property
    def parity_check(self) -> FieldMatrix:
        return kernel_basis(self.generator)

    def codewords(self, guard: int = WD_GUARD) -> Iterable[np.ndarray]:
        """Yield blocks of codewords (rows) covering the whole code once."""
        size = self.q**self.k
        if size > guard:
            raise GuardError(f"q^k = {size} exceeds the enumeration guard {guard}")
        G = self.generator.data
        for start in range(0, size, _CHUNK):
            idx = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
            if self.k:
                powers = self.q ** np.arange(self.k - 1, -1, -1, dtype=np.int64)
                msgs = (idx[:, None] // powers[None, :]) % self.q
                yield (msgs @ G) % self.q
            else:
                yield np.zeros((1, self.n), dtype=np.int64)

    def __str__(self) -> str:
        return f"[{self.n},{self.k}]_{self.q}"


def _enumerate_distribution(c: LinearCode, guard: int) -> WeightDistribution:
    hist = np.zeros(c.n + 1, dtype=np.int64)
    for block in c.codewords(guard):
        hist += np.bincount(np.count_nonzero(block, axis=1), minlength=c.n + 1)
    return WeightDistribution(tuple(int(h) for h in hist))


def weight_distribution(c: LinearCode, guard: int = WD_GUARD) -> WeightDistribution:
    """Exact weight distribution, enumerating whichever of C, C-dual is smaller."""
    if c.n - c.k < c.k:
        dual = dual_code(c)
        return macwilliams(_enumerate_distribution(dual, guard), c.n, c.q, dual.k)
    return _enumerate_distribution(c, guard)


def macwilliams(W: WeightDistribution | Sequence[int], n: int, q: int, k: int) -> WeightDistribution:
    """Dual distribution ``q^-k sum_i W_i K_w(i; n, q)``.

    Raises :class:`InconsistentDistributionError` if the result is not a
    vector of nonnegative integers.
    """
    counts = list(W.counts if isinstance(W, WeightDistribution) else W)
    if len(counts) != n + 1:
        raise ParameterError(f"distribution has {len(counts)} entries, expected n+1 = {n + 1}")
    if sum(counts) != q**k:
        raise InconsistentDistributionError(f"sum of distribution is {sum(counts)}, expected q^k = {q**k}")
    table = krawtchouk_table(n, q)
    scale = q**k
    out = []
    for w in range(n + 1):
        acc = sum(counts[i] * table[w][i] for i in range(n + 1))
        if acc % scale:
            raise InconsistentDistributionError(f"dual count at weight {w} is {acc}/{scale}, not an integer")
        if acc < 0:
            raise InconsistentDistributionError(f"dual count at weight {w} is negative ({acc // scale})")
        out.append(acc // scale)
    return WeightDistribution(tuple(out))


def dual_code(c: LinearCode) -> LinearCode:
    return LinearCode(c.parity_check)


def min_distance(c: LinearCode, guard: int = WD_GUARD) -> int:
    if c.k == 0:
        raise ParameterError("minimum distance of the zero code is undefined")
    return weight_distribution(c, guard).nonzero_weights()[0]


# --- syndromes -----------------------------------------------------------------


def syndrome_steps(H: FieldMatrix) -> np.ndarray:
    """All nonzero scalar multiples ``a * h_i`` of parity-check columns, as digit rows.

    Order: column-major over ``i``, then ``a = 1..p-1``.  Zero columns are kept
    (they yield loops); callers decide what to do with them.
    """
    p = H.p
    cols = H.data.T
    steps = [(a * col) % p for col in cols for a in range(1, p)]
    if not steps:
        return np.zeros((0, H.rows), dtype=np.int64)
    return np.array(steps, dtype=np.int64)


def syndrome_digits(index: np.ndarray, p: int, m: int) -> np.ndarray:
    powers = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (np.asarray(index, dtype=np.int64)[:, None] // powers[None, :]) % p


def syndrome_index(digits: np.ndarray, p: int) -> np.ndarray:
    m = digits.shape[-1]
    powers = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return digits @ powers


def syndrome_neighbors(vertices: np.ndarray, steps: np.ndarray, p: int, m: int) -> np.ndarray:
    """Neighbor table ``out[v, s] = index(digits(v) + steps[s])``."""
    digits = syndrome_digits(vertices, p, m)
    summed = (digits[:, None, :] + steps[None, :, :]) % p
    return syndrome_index(summed, p)


@dataclass(frozen=True)
class CosetProfile:
    weights: np.ndarray = field(repr=False)  # weight of the coset with each syndrome index
    covering_radius: int
    counts: tuple[int, ...]  # number of cosets of each weight 0..covering_radius


def coset_weight_profile(c: LinearCode, guard: int = COSET_GUARD) -> CosetProfile:
    H = c.parity_check
    p, m = c.q, H.rows
    size = p**m
    if size > guard:
        raise GuardError(f"q^(n-k) = {size} exceeds the syndrome guard {guard}")
    steps = syndrome_steps(H)
    steps = steps[np.any(steps != 0, axis=1)]
    dist = np.full(size, -1, dtype=np.int64)
    dist[0] = 0
    frontier = np.zeros(1, dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        found = []
        for start in range(0, frontier.size, 4096):
            nb = syndrome_neighbors(frontier[start : start + 4096], steps, p, m).ravel()
            nb = np.unique(nb)
            nb = nb[dist[nb] < 0]
            dist[nb] = level
            found.append(nb)
        frontier = np.unique(np.concatenate(found)) if found else np.zeros(0, dtype=np.int64)
    if (dist < 0).any():
        # unreachable only if H lacks full row rank, which kernel_basis rules out
        raise ParameterError("parity-check matrix does not have full row rank")
    radius = int(dist.max())
    counts = tuple(int(x) for x in np.bincount(dist, minlength=radius + 1))
    return CosetProfile(dist, radius, counts)


def alphabet_reduction_params(n: int, q: int, p: int) -> int:
    """Length of the F_p code obtained from a code of length ``n`` over F_q, q = p^s."""
    base = prime_power_base(q)
    if base is None or base[0] != p:
        raise ParameterError(f"{q} is not a power of the prime {p}")
    return n * (q - 1) // (p - 1)


# --- standard codes used as fixtures ------------------------------------------------


def projective_points(k: int, p: int) -> np.ndarray:
    """Normalized points of PG(k-1, p) (first nonzero coordinate 1), lexicographic order."""
    vecs = all_vectors(p, k)[1:]
    first = vecs[np.arange(len(vecs)), np.argmax(vecs != 0, axis=1)]
    return vecs[first == 1]


def hamming_code(m: int, p: int = 2) -> LinearCode:
    """The ``[(p^m-1)/(p-1), n-m, 3]_p`` Hamming code."""
    H = FieldMatrix(p, projective_points(m, p).T)
    return LinearCode.from_parity_check(H)


def simplex_code(k: int, p: int = 2) -> LinearCode:
    return LinearCode(FieldMatrix(p, projective_points(k, p).T))


def golay_code() -> LinearCode:
    """Binary ``[23,12,7]`` Golay code, cyclic with g(x) = 1+x^2+x^4+x^5+x^6+x^10+x^11."""
    g = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]
    rows = np.zeros((12, 23), dtype=np.int64)
    for i in range(12):
        rows[i, i : i + 12] = g
    return LinearCode(FieldMatrix(2, rows))
