from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import settings

from crcodes.code import LinearCode, golay_code, hamming_code, simplex_code

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def hamming7():
    return hamming_code(3, 2)


@pytest.fixture(scope="session")
def simplex7():
    return simplex_code(3, 2)


@pytest.fixture(scope="session")
def golay():
    return golay_code()


@pytest.fixture(scope="session")
def tetracode():
    return hamming_code(2, 3)


def brute_weights(c: LinearCode) -> list[int]:
    """Weight histogram by iterating message vectors with itertools (no numpy tricks)."""
    G = c.generator.tolist()
    hist = [0] * (c.n + 1)
    for msg in itertools.product(range(c.q), repeat=c.k):
        word = [sum(m * g for m, g in zip(msg, col)) % c.q for col in zip(*G)]
        hist[sum(1 for x in word if x)] += 1
    return hist


def fixture_codes():
    """Small codes used across property tests."""
    return [
        hamming_code(3, 2),
        simplex_code(3, 2),
        hamming_code(2, 3),
        simplex_code(2, 5),
        hamming_code(2, 5),
        LinearCode.from_rows(2, [[1, 1, 0, 0, 0], [0, 0, 1, 1, 1]]),
        LinearCode.from_rows(3, [[1, 0, 1, 2, 0, 1], [0, 1, 1, 1, 2, 0]]),
        LinearCode.from_rows(7, [[1, 0, 0, 0, 1, 1, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 1, 1, 0, 1]]),
        LinearCode.from_rows(2, np.eye(4, dtype=int).tolist()),
    ]
