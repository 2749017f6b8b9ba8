"""Points and hyperplanes of PG(k-1, q) for prime q.

A code with generator matrix ``G`` (no zero columns) is a multiset of
projective points, one per column.  A nonzero message ``h`` gives the
codeword ``hG`` whose weight is ``n`` minus the number of columns on the
hyperplane ``{x : h.x = 0}``; so the weights of the code are read off the
hyperplane spectrum of the column multiset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..code import projective_points
from ..errors import GuardError, ParameterError
from ..gf import is_prime

SPACE_GUARD = 2**20
GROUP_CAP = 200_000


@dataclass(frozen=True, eq=False)
class ProjectiveSpace:
    k: int
    q: int
    points: np.ndarray = field(repr=False)  # (N, k) normalized representatives, lexicographic
    # on_hyperplanes[p] lists the hyperplanes through point p; hyperplane h is
    # {x : points[h] . x = 0}, so the same array also lists the points on h
    on_hyperplanes: np.ndarray = field(repr=False)
    last_point: np.ndarray = field(repr=False)  # largest point index on each hyperplane
    lookup: np.ndarray = field(repr=False)  # mixed-radix vector -> point index (-1 for 0)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def points_per_hyperplane(self) -> int:
        return self.on_hyperplanes.shape[1]

    def index(self, vec: Sequence[int]) -> int:
        v = np.asarray(vec, dtype=np.int64) % self.q
        return int(self.lookup[v @ self._powers()])

    def _powers(self) -> np.ndarray:
        return self.q ** np.arange(self.k - 1, -1, -1, dtype=np.int64)

    def unit_points(self) -> list[int]:
        """Indices of ``e_1, ..., e_k``."""
        return [self.index(np.eye(self.k, dtype=np.int64)[i]) for i in range(self.k)]

    def hyperplane_counts(self, multiset: Sequence[int]) -> np.ndarray:
        """Number of multiset members (with multiplicity) on every hyperplane."""
        counts = np.zeros(self.size, dtype=np.int64)
        for p in multiset:
            counts[self.on_hyperplanes[p]] += 1
        return counts

    def frame_stabilizer(self, cap: int = GROUP_CAP) -> np.ndarray:
        """Point permutations induced by monomial matrices (modulo scalars).

        These fix ``{e_1..e_k}`` setwise.  If the full group exceeds ``cap``
        elements a subgroup is returned (coordinate permutations, then the
        trivial group); any subgroup keeps the orderly search complete.
        """
        k, q = self.k, self.q
        full = math.factorial(k) * (q - 1) ** (k - 1)
        if full <= cap:
            diags = list(itertools.product(range(1, q), repeat=k - 1))
        elif math.factorial(k) <= cap:
            diags = [(1,) * (k - 1)]
        else:
            return np.arange(self.size, dtype=np.int32)[None, :]
        powers = self._powers()
        out = []
        for perm in itertools.permutations(range(k)):
            permuted = self.points[:, list(perm)]
            for d in diags:
                img = (permuted * np.array((1,) + d)) % q
                out.append(self.lookup[img @ powers])
        return np.array(out, dtype=np.int32)


def build_projective_space(k: int, q: int, guard: int = SPACE_GUARD) -> ProjectiveSpace:
    if not is_prime(q):
        raise ParameterError(f"q = {q} must be prime")
    if k < 1:
        raise ParameterError("dimension must be >= 1")
    if q**k > guard:
        raise GuardError(f"q^k = {q**k} exceeds the projective-space guard {guard}")
    pts = projective_points(k, q)
    N = len(pts)
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    lookup = np.full(q**k, -1, dtype=np.int64)
    for a in range(1, q):
        lookup[((pts * a) % q) @ powers] = np.arange(N)
    rows = []
    for start in range(0, N, 1024):
        block = (pts[start : start + 1024] @ pts.T) % q == 0
        rows.extend(np.nonzero(r)[0] for r in block)
    theta = (q ** (k - 1) - 1) // (q - 1)
    on_h = np.array(rows, dtype=np.int32).reshape(N, theta)
    last = on_h.max(axis=1).astype(np.int32) if theta else np.full(N, -1, dtype=np.int32)
    for arr in (pts, on_h, last, lookup):
        arr.setflags(write=False)
    return ProjectiveSpace(k, q, pts, on_h, last, lookup)


def weight_of_codeword_via_spectrum(space: ProjectiveSpace, multiset: Sequence[int], hyperplane: int) -> int:
    """Weight of the codeword ``points[hyperplane] . G`` for the column multiset."""
    if len(multiset) == 0:
        raise ParameterError("empty multiset")
    on = set(space.on_hyperplanes[hyperplane].tolist())
    return len(multiset) - sum(1 for p in multiset if p in on)


def spectrum_weights(space: ProjectiveSpace, multiset: Sequence[int]) -> set[int]:
    """Set of nonzero codeword weights, via the hyperplane spectrum."""
    return set((len(multiset) - space.hyperplane_counts(multiset)).tolist())
