"""Triangle decomposition: structural contract and its applications."""

import math

import numpy as np
import pytest

from fmtk.core import INF, Matrix, Rng, TripartiteGraph
from fmtk.cli import rand_matrix, rand_tripartite
from fmtk import oracles, products, tridecomp


def _structure_checks(G, D, target, s):
    n1, n2, n3 = G.n1, G.n2, G.n3
    tris = tridecomp.decomposition_triangles(D)
    # disjoint completeness: each target-weight triangle appears exactly once
    assert sorted(tris) == sorted(oracles.brute_zero_triangle_list(G, target))
    assert len(tris) == len(set(tris))
    # purity: every triangle inside every subgraph has exactly target weight
    for cat in D.categories:
        for ux_mask, xv_mask in cat.subgraphs:
            for i, j in zip(*np.nonzero(cat.uv_mask)):
                for k in range(n2):
                    if ux_mask[i, k] and xv_mask[k, j]:
                        assert G.triangle_weight(i, k, j) == target
    # size budgets
    assert len(D.remainder) <= (2 + math.log(n1 * n3)) * n1 * n2 * n3 / s
    assert D.subgraph_count() <= \
        (math.ceil(s * math.log(n1 * n3)) + 1) * s * s


def test_decomposition_contract_random():
    rng = Rng(51, "tri")
    for _ in range(25):
        n1, n2, n3 = (rng.randint(1, 6) for _ in range(3))
        G = rand_tripartite(rng, n1, n2, n3, -4, 4)
        target = rng.randint(-3, 3)
        s = rng.randint(1, n2)
        D = tridecomp.triangle_decomposition(G, target, s)
        _structure_checks(G, D, target, s)


def test_decomposition_rejects_bad_s():
    G = rand_tripartite(Rng(0, "tri"), 2, 2, 2, 0, 2)
    with pytest.raises(ValueError):
        tridecomp.triangle_decomposition(G, 0, 3)


def test_update_uv_equals_rebuild():
    rng = Rng(52, "tri")
    for _ in range(20):
        n1, n2, n3 = (rng.randint(1, 5) for _ in range(3))
        G = rand_tripartite(rng, n1, n2, n3, -4, 4)
        target = rng.randint(-3, 3)
        s = rng.randint(1, n2)
        D = tridecomp.triangle_decomposition(G, target, s)
        G2 = TripartiteGraph(G.ux, G.xv, rand_matrix(rng, n1, n3, -4, 4, 0.2))
        assert tridecomp.decomposition_update_uv(D, G2).to_json() == \
            tridecomp.triangle_decomposition(G2, target, s).to_json()


def test_funny_product_matches_oracle():
    rng = Rng(53, "tri")
    for _ in range(15):
        n = rng.randint(1, 5)
        A = rand_matrix(rng, n, n, 0, 5, 0.2)
        B = rand_matrix(rng, n, n, 0, 5, 0.2)
        Ap = [[rng.randint(0, 10**20) for _ in range(n)] for _ in range(n)]
        Bp = [[rng.randint(0, 10**20) for _ in range(n)] for _ in range(n)]
        C, Cp = tridecomp.funny_product(A, Ap, B, Bp)
        Cw, Cpw = oracles.brute_funny_product(A, Ap, B, Bp)
        assert (C.a == Cw.a).all() and Cp == Cpw


def test_apsp_count_matches_oracle():
    rng = Rng(54, "tri")
    for _ in range(25):
        n = rng.randint(1, 8)
        W = rand_matrix(rng, n, n, 1, 5, 0.35)
        D, C = tridecomp.apsp_count(W)
        Db, Cb = oracles.brute_apsp_count(W)
        assert [[int(v) for v in row] for row in D.a] == Db
        assert C == Cb


def test_bounded_difference_minplus():
    rng = Rng(55, "tri")
    for _ in range(10):
        n = rng.randint(2, 8)
        c0 = rng.randint(1, 3)
        A = Matrix(n, n)
        B = Matrix(n, n)
        for i in range(n):
            a = b = rng.randint(0, 5)
            for j in range(n):
                A.a[i, j] = a
                B.a[j, i] = b
                a += rng.randint(-c0, c0)
                b += rng.randint(-c0, c0)
        ell = rng.randint(1, n)
        s = rng.randint(1, max(1, n // 2))
        got = tridecomp.minplus_bounded_difference(A, B, c0, ell, s)
        assert (got.a == products.minplus_naive(A, B).a).all()


def test_preprocessed_exact_tri_queries():
    rng = Rng(56, "tri")
    for _ in range(8):
        n = rng.randint(1, 4)
        G = rand_tripartite(rng, n, n, n, -3, 3)
        h = tridecomp.preprocessed_exact_tri_build(G, rng.randint(1, n))
        for target in range(-2, 3):
            want = oracles.brute_exact_tri_counts(G, target)
            mask = tridecomp.full_mask(G)
            cnts = tridecomp.preprocessed_exact_tri_query_counts(
                h, mask, target)
            flags = tridecomp.preprocessed_exact_tri_query(h, mask, target)
            assert cnts == want
            assert flags == [[c > 0 for c in row] for row in want]
            # masked query: drop a random uv edge
            if n > 0:
                i, j = rng.randrange(n), rng.randrange(n)
                mask.uv[i, j] = False
                cnts2 = tridecomp.preprocessed_exact_tri_query_counts(
                    h, mask, target)
                assert cnts2[i][j] == 0
                for a in range(n):
                    for b in range(n):
                        if (a, b) != (i, j):
                            assert cnts2[a][b] == want[a][b]


def test_preprocessed_3sum_subset_queries():
    rng = Rng(57, "tri")
    for _ in range(8):
        A = {rng.randint(-10, 10) for _ in range(rng.randint(1, 8))}
        B = {rng.randint(-10, 10) for _ in range(rng.randint(1, 8))}
        C = {rng.randint(-20, 20) for _ in range(rng.randint(1, 8))}
        h = tridecomp.preprocessed_3sum_build(A, B, C)
        for _ in range(3):
            Ap = {x for x in A if rng.random() < 0.6}
            Bp = {x for x in B if rng.random() < 0.6}
            Cp = {x for x in C if rng.random() < 0.6}
            got = tridecomp.preprocessed_3sum_query(h, Ap, Bp, Cp)
            want = {c: sum(1 for a in Ap for b in Bp if a + b == c)
                    for c in Cp}
            assert got == want
        with pytest.raises(ValueError):
            tridecomp.preprocessed_3sum_query(h, {99}, set(), set())
