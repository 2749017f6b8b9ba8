"""Compiled depth-first extension of a column multiset.

The caller fixes the columns ``e_1..e_k`` and an already-accepted sorted
prefix.  The kernel appends further point indices in nondecreasing order and
keeps every hyperplane count feasible:

* a count above ``amax`` or needing more increments than slots remain is
  dead (``P_CAPACITY``);
* a hyperplane whose points all have index below the current candidate can
  never change again, so its count must already be allowed (``P_CLOSURE``;
  this kills every larger candidate too);
* the remaining ``r`` points add exactly ``r * theta`` to the total count,
  bracketed by the least and greatest reachable allowed counts
  (``P_SUM``);
* while the sequence is short, it must be lexicographically minimal among
  its images under the frame stabilizer (``P_SYMMETRY``); sorted images
  of a prefix bound the images of every extension, so this is safe.
"""

from __future__ import annotations

import numpy as np
from numba import njit

P_MULTIPLICITY = 0
P_CAPACITY = 1
P_CLOSURE = 2
P_SUM = 3
P_SYMMETRY = 4
PRUNE_NAMES = ("multiplicity", "capacity", "closure", "spectrum_sum", "symmetry")

ST_NODES = 0
ST_MAX_DEPTH = 1
ST_LEAVES = 2  # solutions (goal == full length) or frontier nodes
ST_PRUNE0 = 3
N_STATS = ST_PRUNE0 + len(PRUNE_NAMES)


@njit(cache=True)
def _is_lex_min(seq, L, group, tmp):
    for g in range(group.shape[0]):
        for i in range(L):
            tmp[i] = group[g, seq[i]]
        # insertion sort; L is small
        for i in range(1, L):
            x = tmp[i]
            j = i - 1
            while j >= 0 and tmp[j] > x:
                tmp[j + 1] = tmp[j]
                j -= 1
            tmp[j + 1] = x
        for i in range(L):
            if tmp[i] != seq[i]:
                if tmp[i] < seq[i]:
                    return False
                break
    return True


@njit(cache=True)
def extend(
    on_h,  # (N, theta) hyperplanes through each point
    last,  # (N,) largest point index on each hyperplane
    by_last,  # hyperplane indices sorted by ``last``
    next_allowed,  # (n+2,) least allowed count >= c, or a huge value
    prev_allowed,  # (n+2,) greatest allowed count <= c, or a huge negative
    amax,
    counts0,  # (N,) hyperplane counts of the fixed part
    mult0,  # (N,) multiplicities of the fixed part
    prefix,  # sorted accepted prefix (excluding e_1..e_k)
    goal,  # prefix length at which a leaf is recorded
    total,  # full length of the appended sequence (n - k)
    group,  # (G, N) point permutations for symmetry pruning
    sym_depth,
    limit,  # stop after this many leaves (0: never)
    out,  # (cap, goal) buffer for leaves
):
    N = on_h.shape[0]
    theta = on_h.shape[1]
    stats = np.zeros(N_STATS, np.int64)
    counts = counts0.copy()
    mult = mult0.copy()
    npre = prefix.shape[0]
    seq = np.zeros(goal + 1, np.int64)
    for i in range(npre):
        seq[i] = prefix[i]
    tmp = np.zeros(goal + 1, np.int64)
    r0 = goal - npre
    if r0 <= 0:
        return stats, 0
    start = prefix[npre - 1] if npre > 0 else 0
    # closure pointer per level into ``by_last``
    cl = np.zeros(r0 + 1, np.int64)
    choose = np.zeros(r0 + 1, np.int64)
    choose[0] = start
    stored = 0
    leaves = 0
    t = 0
    while t >= 0:
        p = choose[t]
        failed_closure = False
        if p < N:
            ptr = cl[t]
            while ptr < N and last[by_last[ptr]] < p:
                c = counts[by_last[ptr]]
                if next_allowed[c] != c:
                    failed_closure = True
                    break
                ptr += 1
            cl[t] = ptr
        if p >= N or failed_closure:
            if failed_closure:
                stats[ST_PRUNE0 + P_CLOSURE] += 1
            t -= 1
            if t >= 0:
                pp = seq[npre + t]
                for j in range(theta):
                    counts[on_h[pp, j]] -= 1
                mult[pp] -= 1
                choose[t] += 1
            continue
        stats[ST_NODES] += 1
        if mult[p] >= amax:
            stats[ST_PRUNE0 + P_MULTIPLICITY] += 1
            choose[t] += 1
            continue
        for j in range(theta):
            counts[on_h[p, j]] += 1
        mult[p] += 1
        depth = npre + t + 1
        r = total - depth
        reason = -1
        for j in range(theta):
            if counts[on_h[p, j]] > amax:
                reason = P_CAPACITY
                break
        if reason < 0:
            sneed = 0
            sup = 0
            for h in range(N):
                c = counts[h]
                nd = next_allowed[c] - c
                if nd > r:
                    reason = P_CAPACITY
                    break
                if last[h] < p:
                    continue
                sneed += nd
                cr = c + r
                if cr > amax:
                    cr = amax
                sup += prev_allowed[cr] - c
            if reason < 0 and (sneed > r * theta or sup < r * theta):
                reason = P_SUM
        if reason < 0 and depth <= sym_depth:
            seq[npre + t] = p
            if not _is_lex_min(seq, depth, group, tmp):
                reason = P_SYMMETRY
        if reason >= 0:
            stats[ST_PRUNE0 + reason] += 1
            for j in range(theta):
                counts[on_h[p, j]] -= 1
            mult[p] -= 1
            choose[t] += 1
            continue
        seq[npre + t] = p
        if depth > stats[ST_MAX_DEPTH]:
            stats[ST_MAX_DEPTH] = depth
        if t + 1 == r0:
            leaves += 1
            if stored < out.shape[0]:
                for i in range(goal):
                    out[stored, i] = seq[i]
                stored += 1
            for j in range(theta):
                counts[on_h[p, j]] -= 1
            mult[p] -= 1
            if limit > 0 and leaves >= limit:
                break
            choose[t] += 1
            continue
        t += 1
        choose[t] = p
        cl[t] = cl[t - 1]
    stats[ST_LEAVES] = leaves
    return stats, stored
