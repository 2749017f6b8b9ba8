from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crcodes.errors import ParameterError, ShapeError
from crcodes.gf import FieldMatrix, PrimeField, all_vectors, is_prime, kernel_basis, mat_vec, prime_power_base, rank, rref

PRIMES = [2, 3, 5, 7, 11, 13]


def test_primes_and_powers():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_power_base(343) == (7, 3)
    assert prime_power_base(2187) == (3, 7)
    assert prime_power_base(10) is None
    assert prime_power_base(1) is None
    with pytest.raises(ParameterError):
        PrimeField(9)


@given(st.sampled_from(PRIMES), st.data())
def test_field_axioms(p, data):
    F = PrimeField(p)
    a, b, c = (data.draw(st.integers(0, p - 1)) for _ in range(3))
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


def matrices(max_rows=5, max_cols=7):
    return st.sampled_from([2, 3, 5, 7]).flatmap(
        lambda p: st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
            lambda rc: st.lists(
                st.lists(st.integers(0, p - 1), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]
            ).map(lambda rows: FieldMatrix(p, rows))
        )
    )


@given(matrices())
def test_rref_properties(M):
    R, r, piv = rref(M)
    assert r == len(piv)
    for i, c in enumerate(piv):
        col = R.data[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert not R.data[r:].any()
    # same row space: stacking does not raise the rank
    both = FieldMatrix(M.p, np.vstack([M.data, R.data]))
    assert rank(both) == r == rank(M)


@given(matrices())
def test_kernel_annihilates(M):
    K = kernel_basis(M)
    assert K.rows == M.cols - rank(M)
    if K.rows:
        assert not (M @ K.T).data.any()
        assert rank(K) == K.rows


def test_rref_examples():
    I = FieldMatrix.identity(5, 4)
    assert rref(I) == (I, 4, (0, 1, 2, 3))
    Z = FieldMatrix.zeros(3, 2, 3)
    assert rref(Z)[1] == 0
    M = FieldMatrix(7, [[1, 0, 0, 0, 1, 1, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 1, 1, 0, 1]])
    assert rank(M) == 3


def test_kernel_examples(hamming7):
    assert kernel_basis(FieldMatrix.identity(2, 3)).rows == 0
    dual = kernel_basis(hamming7.generator)
    words = (all_vectors(2, 3)[1:] @ dual.data) % 2
    assert set(np.count_nonzero(words, axis=1).tolist()) == {4}
    assert kernel_basis(FieldMatrix(2, [[1] * 6])).rows == 5


def test_mat_vec(hamming7):
    I = FieldMatrix.identity(3, 4)
    assert mat_vec(I, [1, 2, 0, 1]).tolist() == [1, 2, 0, 1]
    assert mat_vec(FieldMatrix.zeros(3, 2, 4), [1, 2, 0, 1]).tolist() == [0, 0]
    H = hamming7.parity_check
    e = np.zeros(7, dtype=int)
    e[4] = 1
    assert mat_vec(H, e).tolist() == H.data[:, 4].tolist()
    with pytest.raises(ShapeError):
        mat_vec(I, [1, 2])


def test_all_vectors_order():
    assert all_vectors(3, 2).tolist() == [[a, b] for a in range(3) for b in range(3)]
