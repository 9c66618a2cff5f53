"""Reference-implementation sanity: worked examples and mutual consistency."""

import numpy as np
import pytest

from fmtk.core import INF, Matrix, Rng, TripartiteGraph
from fmtk.cli import rand_matrix, rand_tripartite
from fmtk import oracles


def M(rows):
    return Matrix(len(rows), len(rows[0]),
                  np.array(rows, dtype=np.int64))


def test_brute_minplus_example():
    C = oracles.brute_minplus(M([[0, 2], [1, 3]]), M([[1, 0], [0, 5]]))
    assert C.a.tolist() == [[1, 0], [2, 1]]


def test_brute_3sum_counts_example():
    assert oracles.brute_3sum_counts({1, 2}, {3, 4}, {5}) == {5: 2}


def test_brute_apsp_count_single_edge():
    W = Matrix(2, 2)
    W.a[0, 1] = 7
    dist, cnt = oracles.brute_apsp_count(W)
    assert dist[0][1] == 7 and cnt[0][1] == 1
    assert dist[1][0] == INF and cnt[1][0] == 0
    assert cnt[0][0] == 1


def test_zero_triangle_list_matches_counts():
    rng = Rng(11, "oracles")
    for _ in range(20):
        n = rng.randint(1, 5)
        G = rand_tripartite(rng, n, n, n, -3, 3)
        t = rng.randint(-2, 2)
        tris = oracles.brute_zero_triangle_list(G, t)
        cnts = oracles.brute_exact_tri_counts(G, t)
        per_edge = {}
        for (i, k, j) in tris:
            per_edge[(i, j)] = per_edge.get((i, j), 0) + 1
        for i in range(n):
            for j in range(n):
                assert cnts[i][j] == per_edge.get((i, j), 0)


def test_negative_triangle_counts_consistent():
    rng = Rng(12, "oracles")
    for _ in range(10):
        n = rng.randint(1, 5)
        G = rand_tripartite(rng, n, n, n, -3, 3)
        t = rng.randint(-2, 2)
        neg = oracles.brute_negative_triangle_counts(G, t)
        # below-t counts are sums of exact counts over smaller targets
        lo = -9 - 3  # three edges each >= -3, minus margin
        for i in range(n):
            for j in range(n):
                total = sum(oracles.brute_exact_tri_counts(G, w)[i][j]
                            for w in range(lo, t))
                assert neg[i][j] == total


def test_witness_sets_match_counts():
    rng = Rng(13, "oracles")
    for _ in range(10):
        n = rng.randint(1, 5)
        A = rand_matrix(rng, n, n, 0, 5, 0.2)
        B = rand_matrix(rng, n, n, 0, 5, 0.2)
        sets, C = oracles.brute_minplus_witness_sets(A, B)
        counts = oracles.brute_minplus_witness_counts(A, B)
        for i in range(n):
            for j in range(n):
                assert len(sets[i][j]) == counts[i][j]
                for k in sets[i][j]:
                    assert A[i, k - 1] + B[k - 1, j] == C[i, j]


def test_conv_counts_consistent_with_minplus_conv():
    rng = Rng(14, "oracles")
    for _ in range(10):
        m = rng.randint(1, 12)
        a = [rng.randint(0, 6) for _ in range(m)]
        b = [rng.randint(0, 6) for _ in range(m)]
        c = oracles.brute_minplus_conv(a, b)
        cnt = oracles.brute_3sum_conv_counts(a, b, c)
        for k in range(m):
            if c[k] == INF:
                assert cnt[k] == 0
            else:
                assert cnt[k] >= 1


def test_popularity_vs_popular_pairs():
    from fmtk.core import IndexedSet
    A = IndexedSet(4, [1, 3, INF, 2])
    # pop of (0,0) counts the present elements
    assert oracles.brute_popularity(A, (0, 0)) == 3
    pairs = oracles.brute_popular_pairs(A, 1)   # threshold n/1 = 4, none
    assert pairs == []
    pairs2 = oracles.brute_popular_pairs(A, 2)  # threshold 2: only d=0 class
    assert set(pairs2) == {(1, 1), (2, 2), (4, 4)}


def test_size_guards():
    big = Matrix(200, 200)
    with pytest.raises(Exception):
        oracles.brute_minplus(big, big)


def test_k_clique_example():
    W = M([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    assert oracles.brute_k_clique_count(W, 6, 3) == 1   # the single triangle
    assert oracles.brute_k_clique_count(W, 5, 3) == 0


def test_lex_shortest_path_prefers_fewer_hops():
    # 0-1 direct weight 5 (1 hop) vs 0-2-1 weight 2 (2 hops): hops win
    edges = [(0, 1, 5), (0, 2, 1), (2, 1, 1)]
    out = oracles.brute_lex_shortest_path(3, edges, [0], [1])
    assert out[(0, 1)] == (1, 5)


def test_range_mode_tie_breaks_to_largest_frequency():
    out = oracles.brute_range_mode([1, 1, 2, 2, 3], [(0, 5), (2, 4), (5, 5)])
    assert out[0][1] == 2
    assert out[1] == (2, 2)
    assert out[2] == (None, 0)
