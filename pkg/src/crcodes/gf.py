"""Linear algebra over prime fields F_p.

Matrices are numpy ``int64`` arrays with entries reduced into ``[0, p)``.
Primes here are tiny, so reductions after every product cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError, ShapeError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power_base(q: int) -> tuple[int, int] | None:
    """``(p, s)`` with ``q = p**s`` and ``p`` prime, or ``None``."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    s = 0
    while q % p == 0:
        q //= p
        s += 1
    return (p, s) if q == 1 else None


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ParameterError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p


class FieldMatrix:
    """A matrix over a prime field.  The backing array is read-only."""

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField | int, data):
        if isinstance(field, int):
            field = PrimeField(field)
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D matrix, got ndim={arr.ndim}")
        arr %= field.p
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "FieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field, size: int) -> "FieldMatrix":
        return cls(field, np.eye(size, dtype=np.int64))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool((self.data == other.data).all())

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix(p={self.p}, {self.data.tolist()})"

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p:
            raise ParameterError("matrices over different fields")
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return FieldMatrix(self.field, self.data @ other.data)

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data.T)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()


def rref(M: FieldMatrix) -> tuple[FieldMatrix, int, tuple[int, ...]]:
    """Reduced row echelon form over F_p, with rank and pivot columns."""
    p = M.p
    a = M.data.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return FieldMatrix(M.field, a), r, tuple(pivots)


def rank(M: FieldMatrix) -> int:
    return rref(M)[1]


def kernel_basis(M: FieldMatrix) -> FieldMatrix:
    """Rows form a basis of ``{x : M x = 0}``; ``cols - rank`` rows."""
    R, r, pivots = rref(M)
    p = M.p
    cols = M.cols
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-R.data[row, f]) % p
    return FieldMatrix(M.field, basis.reshape(len(free), cols))


def mat_vec(M: FieldMatrix, v: Sequence[int]) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.ndim != 1 or v.shape[0] != M.cols:
        raise ShapeError(f"vector of length {v.shape} incompatible with {M.shape}")
    return (M.data @ v) % M.p


def all_vectors(p: int, k: int) -> np.ndarray:
    """All ``p**k`` vectors of F_p^k as rows, in mixed-radix order (last digit fastest)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(p**k, dtype=np.int64)
    powers = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % p
