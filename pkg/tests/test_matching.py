"""Blossom maximum matching against exhaustive enumeration."""

import random

import pytest

from qcgt.matching import (
    Matching,
    brute_force_max_matchings,
    edge_in_some_max_matching,
    matching_number,
    max_matching,
    vertex_in_all_max_matchings,
)


def adj_of(n, edges):
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return tuple(adj)


def test_triangle():
    assert matching_number(3, adj_of(3, [(0, 1), (1, 2), (0, 2)])) == 1


def test_path_four():
    m = max_matching(4, adj_of(4, [(0, 1), (1, 2), (2, 3)]))
    assert m.size == 2
    assert m.pairs == frozenset({(0, 1), (2, 3)})


def test_petersen_perfect_matching():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    # independent oracle: enumerate all matchings
    adj = adj_of(10, outer + inner + spokes)
    brute = max(len(m) for m in brute_force_max_matchings(10, adj))
    assert matching_number(10, adj) == brute == 5


def test_vertex_in_all_rows():
    # single edge: both endpoints are in the unique maximum matching
    assert vertex_in_all_max_matchings(2, adj_of(2, [(0, 1)]), 0)
    # path a-b-c: b is in both maximum matchings, a is not
    p3 = adj_of(3, [(0, 1), (1, 2)])
    assert vertex_in_all_max_matchings(3, p3, 1)
    assert not vertex_in_all_max_matchings(3, p3, 0)
    # isolated vertex
    assert not vertex_in_all_max_matchings(2, adj_of(2, []), 0)


def test_edge_in_some_rows():
    assert edge_in_some_max_matching(2, adj_of(2, [(0, 1)]), 0, 1)
    p3 = adj_of(3, [(0, 1), (1, 2)])
    assert edge_in_some_max_matching(3, p3, 0, 1)
    star = adj_of(4, [(0, 1), (0, 2), (0, 3)])
    assert edge_in_some_max_matching(4, star, 0, 1)
    pendant = adj_of(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert edge_in_some_max_matching(4, pendant, 2, 3)


def test_matching_partner():
    m = Matching(frozenset({(0, 1)}))
    assert m.partner(0) == 1 and m.partner(2) is None


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_blossom_vs_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(400):
        n = rng.randint(1, 8)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.45]
        adj = adj_of(n, edges)
        brute = max(len(m) for m in brute_force_max_matchings(n, adj))
        assert matching_number(n, adj) == brute


def test_vertex_and_edge_criteria_vs_enumeration():
    rng = random.Random(9)
    for _ in range(250):
        n = rng.randint(2, 7)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.5]
        adj = adj_of(n, edges)
        all_max = brute_force_max_matchings(n, adj)
        for v in range(n):
            expected = all(any(v in e for e in m) for m in all_max)
            assert vertex_in_all_max_matchings(n, adj, v) == expected
        for u, v in edges:
            expected = any((u, v) in m for m in all_max)
            assert edge_in_some_max_matching(n, adj, u, v) == expected


def test_alive_mask_restriction():
    # deleting the middle of a path splits it into isolated vertices
    p3 = adj_of(3, [(0, 1), (1, 2)])
    assert matching_number(3, p3, alive=0b101) == 0
    assert matching_number(3, p3, alive=0b011) == 1
