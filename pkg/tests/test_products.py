"""Structured products and convolutions against the brute oracles."""

import numpy as np
import pytest

from fmtk.core import INF, Matrix, OpCounter, Rng
from fmtk.cli import rand_array, rand_matrix
from fmtk import oracles, products
from fmtk.products import FreqSplitParams, KeyReductionParams


def M(rows):
    return Matrix(len(rows), len(rows[0]), np.array(rows, dtype=np.int64))


def test_minplus_naive_matches_oracle():
    rng = Rng(1, "prod")
    for _ in range(40):
        n1, n2, n3 = (rng.randint(1, 6) for _ in range(3))
        A = rand_matrix(rng, n1, n2, -9, 9, 0.25)
        B = rand_matrix(rng, n2, n3, -9, 9, 0.25)
        assert (products.minplus_naive(A, B).a ==
                oracles.brute_minplus(A, B).a).all()


def test_minplus_bounded_matches_naive():
    rng = Rng(2, "prod")
    for _ in range(25):
        n = rng.randint(1, 6)
        Mb = rng.randint(1, 10)
        A = rand_matrix(rng, n, n, 0, Mb, 0.25)
        B = rand_matrix(rng, n, n, 0, Mb, 0.25)
        assert (products.minplus_bounded(A, B, Mb).a ==
                products.minplus_naive(A, B).a).all()


def test_dominance_product_matches_oracle_across_r():
    rng = Rng(3, "prod")
    for _ in range(30):
        n = rng.randint(1, 7)
        A = rand_matrix(rng, n, n, -5, 5)
        B = rand_matrix(rng, n, n, -5, 5)
        for r in (1, 2, n + 3):
            assert products.dominance_product(A, B, FreqSplitParams(r)) == \
                oracles.brute_dominance(A, B)


def test_dominance_rejects_inf():
    A = Matrix(1, 1)
    with pytest.raises(ValueError):
        products.dominance_product(A, A)


def test_equality_product_matches_oracle_across_r():
    rng = Rng(4, "prod")
    for _ in range(30):
        n = rng.randint(1, 7)
        A = rand_matrix(rng, n, n, 0, 4)
        B = rand_matrix(rng, n, n, 0, 4)
        for r in (1, 2, n + 3):
            assert products.equality_product(A, B, FreqSplitParams(r)) == \
                oracles.brute_equality(A, B)


def test_generalized_equality_matches_oracle():
    rng = Rng(5, "prod")
    for _ in range(20):
        n = rng.randint(1, 5)
        bound = 6
        A = rand_matrix(rng, n, n, -bound, bound, 0.2)
        Ap = rand_matrix(rng, n, n, 0, bound)
        B = rand_matrix(rng, n, n, -bound, bound, 0.2)
        Bp = rand_matrix(rng, n, n, 0, bound)
        got = products.generalized_equality_product(
            A, Ap, B, Bp, FreqSplitParams(rng.randint(1, 3)), bound)
        assert (got.a == oracles.brute_gen_equality(A, Ap, B, Bp).a).all()


def test_min_witness_and_min_equality_products():
    from fmtk.core import BoolMatrix
    rng = Rng(6, "prod")
    for _ in range(20):
        n = rng.randint(1, 6)
        dense1 = np.array([[rng.random() < 0.5 for _ in range(n)]
                           for _ in range(n)])
        dense2 = np.array([[rng.random() < 0.5 for _ in range(n)]
                           for _ in range(n)])
        W = products.min_witness_product(BoolMatrix.from_dense(dense1),
                                         BoolMatrix.from_dense(dense2))
        for i in range(n):
            for j in range(n):
                ks = [k + 1 for k in range(n) if dense1[i, k] and dense2[k, j]]
                assert W[i, j] == (ks[0] if ks else INF)
        A = rand_matrix(rng, n, n, 0, 4, 0.2)
        B = rand_matrix(rng, n, n, 0, 4, 0.2)
        E = products.min_equality_product(A, B)
        for i in range(n):
            for j in range(n):
                vals = [A[i, k] for k in range(n)
                        if A[i, k] != INF and A[i, k] == B[k, j]]
                assert E[i, j] == (min(vals) if vals else INF)


def test_convolutions_match_oracles():
    rng = Rng(7, "prod")
    for _ in range(40):
        m = rng.randint(1, 14)
        a = rand_array(rng, m, -9, 9, 0.2)
        b = rand_array(rng, m, -9, 9, 0.2)
        assert products.minplus_convolution_naive(a, b) == \
            oracles.brute_minplus_conv(a, b)
        assert products.min_equal_convolution(a, b) == \
            oracles.brute_min_equal_conv(a, b)
        c = products.minplus_convolution_naive(a, b)
        assert products.threesum_convolution_counts(a, b, c) == \
            oracles.brute_3sum_conv_counts(a, b, c)


def test_convolution_first_slot_is_absent():
    assert products.minplus_convolution_naive([1], [1]) == [INF]
    assert products.min_equal_convolution([1, 1], [1, 1])[1] == 1


def test_sumset_direct_and_fft_agree():
    rng = Rng(8, "prod")
    for _ in range(15):
        size = rng.randint(1, 40)
        A = {rng.randint(-300, 300) for _ in range(size)}
        B = {rng.randint(-300, 300) for _ in range(size)}
        want = oracles.brute_sumset(A, B)
        assert products.sumset(A, B, rng.split()) == want
        # force the FFT path by lowering the direct threshold
        assert products.sumset(A, B, rng.split(), direct_threshold=1) == want


def test_sumset_counts_pair_checks():
    c = OpCounter()
    products.sumset({1, 2}, {3}, None, counter=c)
    assert c.get("pair_checks") == 2


def test_minplus_key_reduction_matches_naive():
    rng = Rng(9, "prod")
    for _ in range(25):
        n = rng.randint(1, 6)
        ell = rng.randint(2, 16)
        A = rand_matrix(rng, n, n, 1, ell, 0.2)
        B = rand_matrix(rng, n, n, 1, ell, 0.2)
        params = KeyReductionParams(s=rng.randint(1, n), t=rng.randint(1, ell),
                                    r=rng.randint(1, 3), ell=ell)
        got = products.minplus_key_reduction(A, B, params, rng.split())
        assert (got.a == products.minplus_naive(A, B).a).all()


def test_key_reduction_validates_range():
    A = M([[99]])
    with pytest.raises(ValueError):
        products.minplus_key_reduction(A, A, KeyReductionParams(1, 1, 1, 8),
                                       Rng(0, "x"))
