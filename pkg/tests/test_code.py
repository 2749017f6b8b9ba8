from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest

from crcodes.code import (
    LinearCode,
    WeightDistribution,
    alphabet_reduction_params,
    coset_weight_profile,
    dual_code,
    macwilliams,
    min_distance,
    weight_distribution,
)
from crcodes.errors import GuardError, InconsistentDistributionError, ParameterError
from crcodes.gf import FieldMatrix

from .conftest import brute_weights, fixture_codes


def test_hamming_and_simplex(hamming7, simplex7):
    W = weight_distribution(hamming7)
    assert W.counts == (1, 0, 0, 7, 7, 0, 0, 1)
    assert str(W) == "{0^1,3^7,4^7,7^1}"
    assert str(weight_distribution(simplex7)) == "{0^1,4^7}"
    assert min_distance(hamming7) == 3
    assert min_distance(simplex7) == 4
    full = LinearCode(FieldMatrix.identity(3, 4))
    assert min_distance(full) == 1


@pytest.mark.parametrize("code", fixture_codes(), ids=lambda c: f"[{c.n},{c.k}]_{c.q}")
def test_weight_distribution_matches_brute_force(code):
    assert list(weight_distribution(code).counts) == brute_weights(code)


@pytest.mark.parametrize("code", fixture_codes(), ids=lambda c: f"[{c.n},{c.k}]_{c.q}")
def test_macwilliams_agrees_with_dual_enumeration(code):
    W = weight_distribution(code)
    Wd = macwilliams(W, code.n, code.q, code.k)
    if code.k < code.n:
        assert list(Wd.counts) == brute_weights(dual_code(code))
    else:
        assert Wd.compact() == {0: 1}
    assert macwilliams(Wd, code.n, code.q, code.n - code.k) == W


def test_golay_macwilliams_involution(golay):
    W = weight_distribution(golay)
    assert W.compact() == {0: 1, 7: 253, 8: 506, 11: 1288, 12: 1288, 15: 506, 16: 253, 23: 1}
    Wd = macwilliams(W, 23, 2, 12)
    assert macwilliams(Wd, 23, 2, 11) == W


def test_section5_pair():
    W = WeightDistribution((1, 0, 0, 42, 42, 630, 840, 846))
    assert macwilliams(W, 7, 7, 4).counts == (1, 0, 0, 0, 42, 0, 210, 90)


def test_macwilliams_rejects_inconsistent():
    with pytest.raises(InconsistentDistributionError):
        macwilliams(WeightDistribution((1, 3, 0, 0)), 3, 2, 2)  # fractional
    with pytest.raises(InconsistentDistributionError):
        macwilliams(WeightDistribution((1, 0, 1, 2)), 3, 2, 2)  # negative


def test_weight_distribution_guard(golay):
    with pytest.raises(GuardError):
        weight_distribution(golay, guard=100)


def brute_coset_counts(c: LinearCode) -> list[int]:
    """Minimum weight over every word of each syndrome, by enumerating all q^n words."""
    H = c.parity_check.data
    best: dict[tuple, int] = {}
    for word in itertools.product(range(c.q), repeat=c.n):
        s = tuple(((H @ np.array(word)) % c.q).tolist())
        w = sum(1 for x in word if x)
        if w < best.get(s, c.n + 1):
            best[s] = w
    counts = [0] * (max(best.values()) + 1)
    for w in best.values():
        counts[w] += 1
    return counts


SMALL = [
    c for c in fixture_codes() if c.q ** (c.n - c.k) <= 3**5 and c.q**c.n <= 2**16 and c.k < c.n
]


@pytest.mark.parametrize("code", SMALL, ids=lambda c: f"[{c.n},{c.k}]_{c.q}")
def test_coset_profile_against_brute_force(code):
    prof = coset_weight_profile(code)
    assert list(prof.counts) == brute_coset_counts(code)
    assert prof.covering_radius == len(prof.counts) - 1


def test_coset_profiles(hamming7, golay, tetracode):
    assert coset_weight_profile(hamming7).counts == (1, 7)
    prof = coset_weight_profile(golay)
    assert prof.counts == tuple(comb(23, i) for i in range(4))
    assert prof.covering_radius == 3
    assert coset_weight_profile(tetracode).counts == (1, 8)


def test_alphabet_reduction():
    assert alphabet_reduction_params(7, 9, 3) == 28
    assert alphabet_reduction_params(5, 7, 7) == 5
    assert alphabet_reduction_params(12, 4, 2) == 36
    with pytest.raises(ParameterError):
        alphabet_reduction_params(7, 10, 2)
    with pytest.raises(ParameterError):
        alphabet_reduction_params(7, 9, 2)


def test_rank_deficient_generator_rejected():
    with pytest.raises(ParameterError):
        LinearCode.from_rows(2, [[1, 1, 0], [1, 1, 0]])
