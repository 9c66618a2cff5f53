"""Reduction gadgets: encode, solve with the target primitive, decode back."""

import pytest

from fmtk.core import INF, BoolMatrix, Matrix, OpCounter, Rng
from fmtk.cli import rand_array, rand_matrix
from fmtk import gadgets, oracles, products


def _rand_instance(rng, nmax=4, ymax=3):
    n, x = rng.randint(1, nmax), rng.randint(1, nmax)
    y = rng.randint(1, ymax)
    A = rand_matrix(rng, n, x, 1, y)
    B = rand_matrix(rng, x, n, 1, y)
    return A, B, y


def test_minwitness_gadget_round_trip():
    rng = Rng(71, "gad")
    for _ in range(30):
        A, B, y = _rand_instance(rng)
        g = gadgets.minwitness_gadget(A, B, y)
        got = g.decode(products.min_witness_product(g.A, g.B))
        assert (got.a == products.minplus_naive(A, B).a).all()


def test_minwitness_gadget_handles_absent_entries():
    rng = Rng(72, "gad")
    for _ in range(15):
        n, x = rng.randint(1, 4), rng.randint(1, 4)
        y = rng.randint(1, 3)
        A = rand_matrix(rng, n, x, 1, y, 0.3)
        B = rand_matrix(rng, x, n, 1, y, 0.3)
        g = gadgets.minwitness_gadget(A, B, y)
        got = g.decode(products.min_witness_product(g.A, g.B))
        assert (got.a == products.minplus_naive(A, B).a).all()


def test_minwitness_gadget_corner():
    A = Matrix(1, 1)
    A.a[0, 0] = 1
    g = gadgets.minwitness_gadget(A, A, 1)
    assert g.decode(products.min_witness_product(g.A, g.B))[0, 0] == 2


def test_apslp_gadget_round_trip_and_size():
    rng = Rng(73, "gad")
    done = 0
    while done < 20:
        n = rng.randint(1, 6)
        x = rng.randint(1, 3)
        y = rng.randint(1, 2)
        if x * y * y > n:
            continue
        done += 1
        A = rand_matrix(rng, n, x, 1, y)
        B = rand_matrix(rng, x, n, 1, y)
        g = gadgets.apslp_gadget(A, B, y)
        assert g.n_nodes == 2 * n + x + 2 * x * y * y
        assert len(g.edges) == 2 * n * x + 2 * x * y * y
        dist = oracles.brute_lex_shortest_path(
            g.n_nodes, g.edges, g.sources, g.targets)
        assert (g.decode(dist).a == products.minplus_naive(A, B).a).all()


def test_apslp_gadget_corner_and_precondition():
    A = Matrix(1, 1)
    A.a[0, 0] = 1
    g = gadgets.apslp_gadget(A, A, 1)
    dist = oracles.brute_lex_shortest_path(g.n_nodes, g.edges,
                                           g.sources, g.targets)
    assert g.decode(dist)[0, 0] == 2
    big = rand_matrix(Rng(0, "x"), 2, 2, 1, 2)
    with pytest.raises(ValueError):
        gadgets.apslp_gadget(big, big, 2)    # x*y^2 = 8 > n = 2


def test_range_mode_gadget_round_trip():
    rng = Rng(74, "gad")
    for _ in range(30):
        A, B, y = _rand_instance(rng)
        g = gadgets.range_mode_gadget(A, B, y)
        got = g.decode(oracles.brute_range_mode(g.S, g.queries))
        assert (got.a == products.minplus_naive(A, B).a).all()


def test_range_mode_gadget_corner():
    A = Matrix(1, 1)
    A.a[0, 0] = 1
    g = gadgets.range_mode_gadget(A, A, 1)
    assert g.decode(oracles.brute_range_mode(g.S, g.queries))[0, 0] == 2


def test_minwitness_to_minequal_boolean_and_valued():
    rng = Rng(75, "gad")
    for _ in range(20):
        n = rng.randint(1, 5)
        dense1 = [[rng.random() < 0.5 for _ in range(n)] for _ in range(n)]
        dense2 = [[rng.random() < 0.5 for _ in range(n)] for _ in range(n)]
        import numpy as np
        P = BoolMatrix.from_dense(np.array(dense1))
        Q = BoolMatrix.from_dense(np.array(dense2))
        g = gadgets.minwitness_to_minequal(P, Q)
        got = g.decode(products.min_equality_product(g.A, g.B))
        want = products.min_witness_product(P, Q)
        assert all(got[i, j] == want[i, j]
                   for i in range(n) for j in range(n))
        V = rand_matrix(rng, n, n, 1, 3)
        W = rand_matrix(rng, n, n, 1, 3)
        g2 = gadgets.minwitness_to_minequal(V, W)
        got2 = g2.decode(products.min_equality_product(g2.A, g2.B))
        for i in range(n):
            for j in range(n):
                ks = [k + 1 for k in range(n) if V[i, k] == W[k, j]]
                assert got2[i, j] == (ks[0] if ks else INF)


def test_minequalprod_to_conv_round_trip():
    rng = Rng(76, "gad")
    for n in [1, 1, 2, 3, 4, 5]:
        A = rand_matrix(rng, n, n, 1, 2 * n * n)
        B = rand_matrix(rng, n, n, 1, 2 * n * n)
        g = gadgets.minequalprod_to_conv(A, B)
        assert len(g.a) == 2 * n * n and len(g.b) == 2 * n * n
        got = g.decode(products.min_equal_convolution(g.a, g.b))
        assert (got.a == products.min_equality_product(A, B).a).all()


def test_minequalprod_to_conv_rejects_out_of_range():
    A = Matrix(2, 2)
    A.a[:] = 100            # > 2n^2 = 8
    with pytest.raises(ValueError):
        gadgets.minequalprod_to_conv(A, A)


def test_minplus_conv_via_minequal_matches_naive():
    rng = Rng(77, "gad")
    for m in [4, 8, 16, 25]:
        a = rand_array(rng, m, 0, m)
        b = rand_array(rng, m, 0, m)
        got = gadgets.minplus_conv_via_minequal(
            a, b, products.min_equal_convolution, (1, 2, 2), rng.split())
        assert got == products.minplus_convolution_naive(a, b)


def test_minplus_conv_via_minequal_with_absent_entries():
    rng = Rng(78, "gad")
    for _ in range(4):
        m = 16
        a = rand_array(rng, m, 0, m, 0.25)
        b = rand_array(rng, m, 0, m, 0.25)
        got = gadgets.minplus_conv_via_minequal(
            a, b, products.min_equal_convolution, (1, 2, 2), rng.split())
        assert got == products.minplus_convolution_naive(a, b)


def test_minplus_conv_via_minequal_counter_and_params():
    rng = Rng(79, "gad")
    m = 36
    a = rand_array(rng, m, 0, 3 * m)
    b = rand_array(rng, m, 0, 3 * m)
    c = OpCounter()
    got = gadgets.minplus_conv_via_minequal(
        a, b, products.min_equal_convolution, (2, 3, 2), rng.split(),
        counter=c)
    assert got == products.minplus_convolution_naive(a, b)
    assert c.get("oracle_calls") > 0


def test_minplus_conv_via_minequal_rejects_bad_params():
    a = [1] * 16
    with pytest.raises(ValueError):
        gadgets.minplus_conv_via_minequal(
            a, a, products.min_equal_convolution, (4, 16, 2), Rng(0, "x"))


def test_minplus_conv_via_minequal_spot_checks_oracle():
    a = [1] * 16

    def bad_oracle(x, y):
        return [INF] * len(x)

    with pytest.raises(RuntimeError):
        gadgets.minplus_conv_via_minequal(
            a, a, bad_oracle, (1, 2, 2), Rng(3, "x"))
