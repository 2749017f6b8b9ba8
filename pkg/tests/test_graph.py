from __future__ import annotations

from math import comb

import numpy as np
import pytest

from crcodes.code import LinearCode, coset_weight_profile, min_distance
from crcodes.errors import MultigraphError
from crcodes.gf import FieldMatrix
from crcodes.graph import (
    Graph,
    Partition,
    bfs_distance_partition,
    completely_regular_check,
    coset_graph,
    diameter,
    distance_regularity,
    is_equitable,
)
from crcodes.screen import class_sizes

from .conftest import fixture_codes


def complete(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n, chords=()):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)] + list(chords))


def test_coset_graph_hamming_is_k8(hamming7, tetracode):
    g = coset_graph(hamming7)
    assert g.order == 8 and g.degree() == 7
    assert list(g.edges()) == list(complete(8).edges())
    t = coset_graph(tetracode)
    assert t.order == 9 and t.degree() == 8


def test_coset_graph_golay(golay):
    g = coset_graph(golay)
    assert g.order == 2048 and g.degree() == 23
    assert diameter(g, vertex_transitive=True) == 3
    assert bfs_distance_partition(g, 0).sizes() == tuple(comb(23, i) for i in range(4))
    check = is_equitable(g, bfs_distance_partition(g, 0))
    S = check.quotient
    assert S.is_tridiagonal()
    assert [S[i, i + 1] for i in range(3)] == [23, 22, 21]
    assert [S[i + 1, i] for i in range(3)] == [1, 2, 3]


def test_golay_dr_modes_agree(golay):
    g = coset_graph(golay)
    a = distance_regularity(g, "from-zero").array
    b = distance_regularity(g, "all-vertices").array
    assert str(a) == str(b) == "{23,22,21;1,2,3}"


@pytest.mark.parametrize("code", [c for c in fixture_codes() if c.k < c.n], ids=lambda c: f"[{c.n},{c.k}]_{c.q}")
def test_coset_graph_degree_and_radius(code):
    if min_distance(code) < 3:
        with pytest.raises(MultigraphError):
            coset_graph(code)
        return
    g = coset_graph(code)
    assert g.degree() == (code.q - 1) * code.n
    dist = bfs_distance_partition(g, 0)
    assert dist.count - 1 == coset_weight_profile(code).covering_radius
    dr = distance_regularity(g)
    if dr:
        assert class_sizes(dr.array).as_ints() == dist.sizes()
        assert str(distance_regularity(g, "all-vertices").array) == str(dr.array)


def test_multigraph_error():
    with pytest.raises(MultigraphError):
        coset_graph(LinearCode.from_rows(2, [[1, 1, 0], [0, 1, 1]]))


def test_bfs_partitions():
    assert bfs_distance_partition(complete(8), 3).sizes() == (1, 7)
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert bfs_distance_partition(path, 0).sizes() == (1, 1, 1)


def test_equitable_examples():
    g = complete(8)
    assert is_equitable(g, bfs_distance_partition(g, 0)).quotient.tolist() == [[0, 7], [1, 6]]
    c = cycle(6)
    assert is_equitable(c, Partition([0] * 6)).quotient.tolist() == [[2]]


def test_dr_examples(hamming7):
    assert str(distance_regularity(complete(8)).array) == "{7;1}"
    chorded = cycle(6, [(0, 3)])
    res = distance_regularity(chorded)
    assert res.array is None and res.witness
    assert str(completely_regular_check(hamming7).array) == "{7;1}"


def _mutate(g: Graph, rng) -> Graph:
    """Move one edge endpoint: drop (u, v), add (u, w) for a non-neighbor w."""
    edges = list(g.edges())
    while True:
        u, v = edges[rng.integers(len(edges))]
        nonadj = [w for w in range(g.order) if w != u and w not in set(g.neighbors(u).tolist())]
        if nonadj:
            w = nonadj[rng.integers(len(nonadj))]
            new = [e for e in edges if e != (u, v)] + [(min(u, w), max(u, w))]
            return Graph.from_edges(g.order, new)


@pytest.mark.parametrize("seed", range(10))
def test_equitability_mutation(golay, seed):
    """A single edge move breaks the distance partition of the Golay coset graph."""
    rng = np.random.default_rng(seed)
    g = coset_graph(golay)
    part = bfs_distance_partition(g, 0)
    assert is_equitable(g, part)
    h = _mutate(g, rng)
    check = is_equitable(h, part)
    assert not check
    w = check.witness
    assert w.count != w.expected


@pytest.mark.parametrize("seed", range(5))
def test_equitability_mutation_small(hamming7, seed):
    rng = np.random.default_rng(100 + seed)
    g = cycle(8)
    part = Partition([min(i, 8 - i) for i in range(8)])
    assert is_equitable(g, part).quotient.tolist() == [[0, 2, 0, 0, 0], [1, 0, 1, 0, 0], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1], [0, 0, 0, 2, 0]]
    assert not is_equitable(_mutate(g, rng), part)


def test_random_code_not_completely_regular():
    rng = np.random.default_rng(7)
    found = False
    for _ in range(200):
        G = np.concatenate([np.eye(5, dtype=int), rng.integers(0, 2, (5, 5))], axis=1)
        c = LinearCode(FieldMatrix(2, G))
        if min_distance(c) >= 3 and not completely_regular_check(c):
            found = True
            break
    assert found


def test_adjacency_round_trip():
    g = cycle(6, [(0, 3)])
    assert list(Graph.parse_adjacency_text(g.to_adjacency_text()).edges()) == list(g.edges())
