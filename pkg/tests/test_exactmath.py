from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crcodes.arrays import IntersectionArray
from crcodes.errors import ParameterError, ShapeError
from crcodes.exactmath import (
    RationalMatrix,
    binomial,
    is_integer_matrix,
    krawtchouk_eval,
    krawtchouk_matrix_eval,
    krawtchouk_matrix_sequence,
    krawtchouk_table,
    matrix_from_ints,
)
from crcodes.screen import _inverse_k1, quotient_from_array


def gf_krawtchouk(w, x, n, q):
    """Coefficient of z^w in (1 + (q-1) z)^(n-x) (1 - z)^x, by integer polynomial products."""
    poly = np.array([1], dtype=object)
    for _ in range(n - x):
        poly = np.convolve(poly, np.array([1, q - 1], dtype=object))
    for _ in range(x):
        poly = np.convolve(poly, np.array([1, -1], dtype=object))
    return int(poly[w]) if w < len(poly) else 0


def test_binomial_examples():
    assert binomial(7, 3) == 35
    assert binomial(-5, 0) == 1
    assert binomial(-1, 2) == 1
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)


@given(st.integers(0, 30), st.integers(0, 30))
def test_binomial_matches_comb(n, k):
    assert binomial(n, k) == comb(n, k)


def test_krawtchouk_scalar_examples():
    for n, q in [(5, 2), (7, 7), (4, 3)]:
        for x in range(n + 1):
            assert krawtchouk_eval(0, x, n, q) == 1
            assert krawtchouk_eval(1, x, n, q) == (q - 1) * n - q * x
        for w in range(n + 1):
            assert krawtchouk_eval(w, 0, n, q) == (q - 1) ** w * comb(n, w)


def test_krawtchouk_errors():
    with pytest.raises(ParameterError):
        krawtchouk_eval(4, 0, 3, 2)
    with pytest.raises(ParameterError):
        krawtchouk_eval(1, 0, 3, 1)


@given(st.integers(1, 10), st.sampled_from([2, 3, 5, 7]), st.data())
def test_krawtchouk_against_generating_function(n, q, data):
    w = data.draw(st.integers(0, n))
    x = data.draw(st.integers(0, n))
    assert krawtchouk_eval(w, x, n, q) == gf_krawtchouk(w, x, n, q)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
@pytest.mark.parametrize("n", range(1, 11))
def test_krawtchouk_orthogonality(n, q):
    T = krawtchouk_table(n, q)
    for k in range(n + 1):
        for l in range(n + 1):
            s = sum(T[k][x] * T[l][x] * (q - 1) ** x * comb(n, x) for x in range(n + 1))
            assert s == (q**n * (q - 1) ** k * comb(n, k) if k == l else 0)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
@pytest.mark.parametrize("n", range(1, 11))
def test_krawtchouk_row_sums(n, q):
    T = krawtchouk_table(n, q)
    for x in range(n + 1):
        assert sum(T[w][x] for w in range(n + 1)) == (q**n if x == 0 else 0)


@given(st.integers(1, 8), st.sampled_from([2, 3, 5]), st.data())
def test_matrix_scalar_consistency(n, q, data):
    w = data.draw(st.integers(0, n))
    x = Fraction(data.draw(st.integers(-20, 20)), data.draw(st.integers(1, 5)))
    M = krawtchouk_matrix_eval(w, RationalMatrix.from_rows([[x]]), n, q)
    assert M[0, 0] == krawtchouk_eval(w, x, n, q)


def test_matrix_sequence_matches_formula():
    a = IntersectionArray.parse("{42,30,12;1,6,28}")
    X = _inverse_k1(quotient_from_array(a), 7, 7)
    for w, Sw in krawtchouk_matrix_sequence(X, 7, 7):
        assert Sw == krawtchouk_matrix_eval(w, X, 7, 7)


def test_matrix_eval_low_degrees():
    X = matrix_from_ints([[1, 2], [3, 4]])
    assert krawtchouk_matrix_eval(0, X, 5, 3) == RationalMatrix.identity(2)
    assert krawtchouk_matrix_eval(1, X, 5, 3) == RationalMatrix.scalar(2, 10) - X.scale(3)
    with pytest.raises(ShapeError):
        krawtchouk_matrix_eval(1, matrix_from_ints([[1, 2]]), 5, 3)


def test_section5_matrix_is_integral_with_expected_corner():
    a = IntersectionArray.parse("{42,30,12;1,6,28}")
    X = _inverse_k1(quotient_from_array(a), 7, 7)
    corner = []
    for w in range(8):
        Sw = krawtchouk_matrix_eval(w, X, 7, 7)
        assert is_integer_matrix(Sw)[0]
        corner.append(int(Sw[0, 0]))
    assert corner == [1, 0, 0, 42, 42, 630, 840, 846]


def test_is_integer_matrix_witness():
    assert is_integer_matrix(RationalMatrix.identity(3)) == (True, None)
    M = RationalMatrix.from_rows([[1, 2], [Fraction(1, 2), Fraction(1, 3)]])
    assert is_integer_matrix(M) == (False, (1, 0, Fraction(1, 2)))


def test_k3_not_integral_for_36_array():
    a = IntersectionArray.parse("{36,28,4;1,2,24}")
    X = _inverse_k1(quotient_from_array(a), 36, 2)
    assert not is_integer_matrix(krawtchouk_matrix_eval(3, X, 36, 2))[0]


def test_equal_rationals_compare_equal():
    assert RationalMatrix.from_rows([[Fraction(2, 4)]]) == RationalMatrix.from_rows([[Fraction(1, 2)]])
