"""Exact rational arithmetic: binomials, Krawtchouk polynomials, matrix polynomials.

Rationals are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator.  :class:`RationalMatrix` is a small
immutable dense matrix over those rationals; quotient matrices in this
package are at most a handful of rows, so plain Python loops are fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .errors import ParameterError, ShapeError

Rational = Fraction

__all__ = [
    "Rational",
    "RationalMatrix",
    "binomial",
    "krawtchouk_eval",
    "krawtchouk_matrix_eval",
    "krawtchouk_matrix_sequence",
    "krawtchouk_table",
    "is_integer_matrix",
]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def binomial(n, k: int):
    """Generalized binomial coefficient ``n (n-1) ... (n-k+1) / k!``.

    ``n`` may be any integer or rational; the result is an ``int`` for
    integer ``n`` and a :class:`Fraction` otherwise.  ``k`` must be >= 0.
    """
    if k < 0:
        raise ParameterError(f"binomial lower index must be >= 0, got {k}")
    if isinstance(n, int):
        num = 1
        for i in range(k):
            num *= n - i
        den = 1
        for i in range(2, k + 1):
            den *= i
        return num // den  # exact: k consecutive integers are divisible by k!
    n = _as_fraction(n)
    out = Fraction(1)
    for i in range(k):
        out = out * (n - i) / (i + 1)
    return out


def _check_kq(k: int, n: int, q: int) -> None:
    if q < 2:
        raise ParameterError(f"alphabet size must be >= 2, got {q}")
    if n < 0 or k < 0 or k > n:
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")


def krawtchouk_eval(k: int, x, n: int, q: int) -> Fraction:
    """Evaluate ``K_k(x; n, q) = sum_j (-1)^j (q-1)^(k-j) C(x, j) C(n-x, k-j)``."""
    _check_kq(k, n, q)
    x = _as_fraction(x)
    total = Fraction(0)
    for j in range(k + 1):
        term = (q - 1) ** (k - j) * binomial(x, j) * binomial(n - x, k - j)
        total += -term if j % 2 else term
    return total


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of :class:`Fraction` entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_as_fraction(v) for v in row) for row in self.entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("rows of a matrix must have equal length")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls.scalar(size, 1)

    @classmethod
    def scalar(cls, size: int, value) -> "RationalMatrix":
        value = _as_fraction(value)
        zero = Fraction(0)
        return cls(tuple(tuple(value if i == j else zero for j in range(size)) for i in range(size)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def __iter__(self):
        return iter(self.entries)

    def _same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c) -> "RationalMatrix":
        c = _as_fraction(c)
        return RationalMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries))
        return RationalMatrix(
            tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.entries)
        )

    def to_int_rows(self) -> list[list[int]]:
        """Entries as ints; raises ``ValueError`` if any entry is fractional."""
        out = []
        for r in self.entries:
            if any(v.denominator != 1 for v in r):
                raise ValueError("matrix has non-integer entries")
            out.append([int(v) for v in r])
        return out

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in r) for r in self.entries)


def _binomial_matrices(X: RationalMatrix, upto: int) -> list[RationalMatrix]:
    """``[C(X, 0), ..., C(X, upto)]`` via ``C(X, j) = C(X, j-1) (X - (j-1) I) / j``."""
    size = X.rows
    out = [RationalMatrix.identity(size)]
    for j in range(1, upto + 1):
        shifted = X - RationalMatrix.scalar(size, j - 1)
        out.append((out[-1] @ shifted).scale(Fraction(1, j)))
    return out


def krawtchouk_matrix_eval(w: int, X: RationalMatrix, n: int, q: int) -> RationalMatrix:
    """``K_w`` evaluated at a square matrix argument.

    Factors ``C(X, j)`` and ``C(nI - X, w - j)`` are falling-factorial products
    of polynomials in ``X`` and therefore commute.
    """
    if not X.is_square:
        raise ShapeError(f"matrix argument must be square, got {X.shape}")
    _check_kq(w, n, q)
    size = X.rows
    left = _binomial_matrices(X, w)
    right = _binomial_matrices(RationalMatrix.scalar(size, n) - X, w)
    total = RationalMatrix.scalar(size, 0)
    for j in range(w + 1):
        term = (left[j] @ right[w - j]).scale((q - 1) ** (w - j))
        total = total - term if j % 2 else total + term
    return total


def krawtchouk_matrix_sequence(X: RationalMatrix, n: int, q: int, w_max: int | None = None):
    """Yield ``(w, K_w(X))`` for ``w = 0..w_max`` using the three-term recurrence

    ``(w+1) K_{w+1} = ((q-1)(n-w) + w - qX) K_w - (q-1)(n-w+1) K_{w-1}``.

    Equivalent to repeated :func:`krawtchouk_matrix_eval` calls but linear in
    ``w_max`` instead of quadratic.
    """
    if not X.is_square:
        raise ShapeError(f"matrix argument must be square, got {X.shape}")
    w_max = n if w_max is None else w_max
    _check_kq(w_max, n, q)
    size = X.rows
    prev = RationalMatrix.scalar(size, 0)
    cur = RationalMatrix.identity(size)
    qX = X.scale(q)
    yield 0, cur
    for w in range(w_max):
        lin = RationalMatrix.scalar(size, (q - 1) * (n - w) + w) - qX
        nxt = ((lin @ cur) - prev.scale((q - 1) * (n - w + 1))).scale(Fraction(1, w + 1))
        prev, cur = cur, nxt
        yield w + 1, cur


def krawtchouk_table(n: int, q: int) -> list[list[int]]:
    """Integer table ``T[w][x] = K_w(x; n, q)`` for ``0 <= w, x <= n``."""
    _check_kq(0, n, q)
    rows = [[1] * (n + 1)]
    if n == 0:
        return rows
    rows.append([(q - 1) * n - q * x for x in range(n + 1)])
    for w in range(1, n):
        a, b = rows[w], rows[w - 1]
        nxt = []
        for x in range(n + 1):
            num = ((q - 1) * (n - w) + w - q * x) * a[x] - (q - 1) * (n - w + 1) * b[x]
            nxt.append(num // (w + 1))
        rows.append(nxt)
    return rows


def is_integer_matrix(M: RationalMatrix) -> tuple[bool, tuple[int, int, Fraction] | None]:
    """Return ``(True, None)`` or ``(False, (row, col, value))`` for the first
    non-integer entry in row-major order."""
    for i, row in enumerate(M.entries):
        for j, v in enumerate(row):
            if v.denominator != 1:
                return False, (i, j, v)
    return True, None


def matrix_from_ints(rows: Sequence[Sequence[int]]) -> RationalMatrix:
    return RationalMatrix.from_rows(rows)
