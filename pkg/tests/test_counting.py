"""Counting routines: exact witness counts and the detector/anchor pipeline."""

import pytest

from fmtk.core import INF, Matrix, Rng, TripartiteGraph
from fmtk.cli import rand_array, rand_matrix, rand_tripartite
from fmtk import counting, oracles, products


def test_count_minplus_matches_oracle():
    rng = Rng(31, "cnt")
    for _ in range(30):
        n1, n2, n3 = (rng.randint(1, 6) for _ in range(3))
        A = rand_matrix(rng, n1, n2, 0, 5, 0.2)
        B = rand_matrix(rng, n2, n3, 0, 5, 0.2)
        assert counting.count_minplus(A, B, rng.split()) == \
            oracles.brute_minplus_witness_counts(A, B)


def test_count_minplus_cap_sweep():
    rng = Rng(32, "cnt")
    for _ in range(15):
        n = rng.randint(2, 6)
        A = rand_matrix(rng, n, n, 0, 2, 0.1)   # small range => many ties
        B = rand_matrix(rng, n, n, 0, 2, 0.1)
        want = oracles.brute_minplus_witness_counts(A, B)
        for cap in (1, 2, n):
            assert counting.count_minplus(A, B, rng.split(), cap=cap) == want


def test_count_exact_tri_matches_oracle():
    rng = Rng(33, "cnt")
    for _ in range(30):
        n1, n2, n3 = (rng.randint(1, 6) for _ in range(3))
        G = rand_tripartite(rng, n1, n2, n3, -4, 4)
        t = rng.randint(-3, 3)
        assert counting.count_ae_exact_tri(G, t) == \
            oracles.brute_exact_tri_counts(G, t)
        for cap in (1, 2):
            assert counting.count_ae_exact_tri(G, t, cap=cap) == \
                oracles.brute_exact_tri_counts(G, t)


def test_scan_detector_contract():
    rng = Rng(34, "cnt")
    for _ in range(15):
        n = rng.randint(1, 5)
        G = rand_tripartite(rng, n, n, n, -3, 3)
        t = rng.randint(-2, 2)
        cap = rng.randint(1, n)
        lists, truncated = counting.scan_detector(G, t, cap)
        full = oracles.brute_exact_tri_counts(G, t)
        for i in range(n):
            for j in range(n):
                got = lists[i][j]
                assert len(got) == min(full[i][j], cap)
                assert truncated[i][j] == (full[i][j] > cap)
                for k in got:
                    assert G.triangle_weight(i, k - 1, j) == t


def test_anchor_counts_valid_cells():
    rng = Rng(35, "cnt")
    for _ in range(15):
        n = rng.randint(2, 5)
        G = rand_tripartite(rng, n, n, n, -3, 3)
        t = rng.randint(-2, 2)
        S = sorted({rng.randint(1, n) for _ in range(2)})
        counts, valid = counting.count_exact_tri_via_anchor(G, t, S)
        full = oracles.brute_exact_tri_counts(G, t)
        tris = oracles.brute_zero_triangle_list(G, t)
        for i in range(n):
            for j in range(n):
                anchored = any((i, s - 1, j) in tris for s in S)
                if anchored:
                    assert valid[i][j] and counts[i][j] == full[i][j]


def test_counting_witnesses_via_hitting_valid_cells():
    rng = Rng(36, "cnt")
    for _ in range(15):
        n = rng.randint(2, 5)
        A = rand_matrix(rng, n, n, 0, 4, 0.2)
        B = rand_matrix(rng, n, n, 0, 4, 0.2)
        S = sorted({rng.randint(1, n) for _ in range(2)})
        counts, valid = counting.count_minplus_witnesses_via_hitting(A, B, S)
        sets, _ = oracles.brute_minplus_witness_sets(A, B)
        for i in range(n):
            for j in range(n):
                if valid[i][j]:
                    assert counts[i][j] == len(sets[i][j])
                if set(S) & set(sets[i][j]):
                    assert valid[i][j]


def test_negtri_rewrite_sums_to_below_target_counts():
    rng = Rng(37, "cnt")
    for _ in range(12):
        n = rng.randint(1, 4)
        G = rand_tripartite(rng, n, n, n, -3, 3)
        t = rng.randint(-2, 2)
        want = oracles.brute_negative_triangle_counts(G, t)
        inst = counting.negtri_to_exacttri_instances(G, t)
        total = [[0] * n for _ in range(n)]
        for (Gi, ti) in inst.instances:
            c = oracles.brute_exact_tri_counts(Gi, ti)
            for i in range(n):
                for j in range(n):
                    total[i][j] += c[i][j]
        assert total == want


def test_count_3sum_conv_and_heavy():
    rng = Rng(38, "cnt")
    for _ in range(20):
        m = rng.randint(1, 12)
        a = rand_array(rng, m, 0, 9, 0.1)
        b = rand_array(rng, m, 0, 9, 0.1)
        c = products.minplus_convolution_naive(a, b)
        want = oracles.brute_3sum_conv_counts(a, b, c)
        assert counting.count_all_nums_3sum_conv(a, b, c, rng=rng.split()) \
            == want
        got = counting.count_3sum_conv_heavy(a, b, c, 1, rng.split())
        assert got == want  # L=1 makes every index heavy, so all are exact


def test_count_all_nums_3sum_matches_oracle():
    rng = Rng(39, "cnt")
    for _ in range(20):
        A = {rng.randint(-15, 15) for _ in range(rng.randint(1, 10))}
        B = {rng.randint(-15, 15) for _ in range(rng.randint(1, 10))}
        C = {rng.randint(-30, 30) for _ in range(rng.randint(1, 10))}
        assert counting.count_all_nums_3sum(A, B, C, rng.split()) == \
            oracles.brute_3sum_counts(A, B, C)


def test_count_minplus_conv_matches_counts_oracle():
    rng = Rng(40, "cnt")
    for _ in range(20):
        m = rng.randint(1, 12)
        a = rand_array(rng, m, 0, 8, 0.1)
        b = rand_array(rng, m, 0, 8, 0.1)
        c = products.minplus_convolution_naive(a, b)
        assert counting.count_minplus_conv(a, b, rng=rng.split()) == \
            oracles.brute_3sum_conv_counts(a, b, c)


def test_minplus_from_counting_round_trip():
    rng = Rng(41, "cnt")
    for _ in range(10):
        n = rng.randint(1, 5)
        A = rand_matrix(rng, n, n, 0, 6, 0.2)
        B = rand_matrix(rng, n, n, 0, 6, 0.2)
        got = counting.minplus_from_counting(
            A, B, lambda x, y: counting.count_minplus(x, y, rng.split()))
        assert (got.a == products.minplus_naive(A, B).a).all()
        m = rng.randint(1, 10)
        a = rand_array(rng, m, 0, 6, 0.2)
        b = rand_array(rng, m, 0, 6, 0.2)
        assert counting.minplus_conv_from_counting(
            a, b, lambda x, y: counting.count_minplus_conv(
                x, y, rng=rng.split())) == \
            products.minplus_convolution_naive(a, b)


def test_k_clique_counts_match_oracle():
    rng = Rng(42, "cnt")
    for _ in range(12):
        n = rng.randint(3, 7)
        W = rand_matrix(rng, n, n, 0, 3)
        W.a = (W.a + W.a.T) // 2   # symmetric weights
        for k in (3, 4, 5):
            if n < k:
                continue
            t = rng.randint(0, 3 * k)
            assert counting.count_exact_k_clique(W, t, k) == \
                oracles.brute_k_clique_count(W, t, k)


def test_k_clique_rejects_bad_k():
    W = Matrix(3, 3)
    with pytest.raises(ValueError):
        counting.count_exact_k_clique(W, 0, 6)


def test_apsp_count_mod_matches_oracle_mod():
    rng = Rng(43, "cnt")
    for _ in range(12):
        n = rng.randint(1, 6)
        W = rand_matrix(rng, n, n, 1, 5, 0.3)
        U = rng.randint(2, 97)
        got = counting.apsp_count_mod(W, U)
        _, cnt = oracles.brute_apsp_count(W)
        assert got == [[c % U for c in row] for row in cnt]
