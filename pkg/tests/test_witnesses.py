"""Witness recovery: unique-witness assembly, capped listing, hitting sets."""

import math

import numpy as np

from fmtk.core import INF, Matrix, NOT_UNIQUE, Rng
from fmtk.cli import rand_matrix
from fmtk import oracles, witnesses


def test_unique_witness_matrix_contract():
    rng = Rng(21, "wit")
    for _ in range(40):
        n1, n2, n3 = (rng.randint(1, 6) for _ in range(3))
        A = rand_matrix(rng, n1, n2, 0, 6, 0.2)
        B = rand_matrix(rng, n2, n3, 0, 6, 0.2)
        sets, _ = oracles.brute_minplus_witness_sets(A, B)
        W = witnesses.unique_witness_matrix(A, B)
        for i in range(n1):
            for j in range(n3):
                w = int(W[i, j])
                ws = sets[i][j]
                if len(ws) == 1:
                    assert w == ws[0]
                else:
                    assert w == NOT_UNIQUE or w in ws


def test_unique_witness_all_absent():
    A = Matrix(2, 2)
    W = witnesses.unique_witness_matrix(A, A)
    assert (np.asarray(W) == NOT_UNIQUE).all() or \
        all(int(W[i, j]) == NOT_UNIQUE for i in range(2) for j in range(2))


def test_capped_listing_is_complete_or_exactly_cap():
    rng = Rng(22, "wit")
    for _ in range(30):
        n = rng.randint(1, 6)
        A = rand_matrix(rng, n, n, 0, 4, 0.15)
        B = rand_matrix(rng, n, n, 0, 4, 0.15)
        sets, _ = oracles.brute_minplus_witness_sets(A, B)
        cap = rng.randint(1, n)
        rep = witnesses.list_witnesses_capped(A, B, cap, rng.split())
        assert rep.cap == cap
        for i in range(n):
            for j in range(n):
                ws = sets[i][j]
                got = rep.witnesses[i][j]
                if len(ws) <= cap:
                    assert got == ws
                    assert not rep.truncated[i][j]
                else:
                    assert len(got) == cap
                    assert rep.truncated[i][j]
                    assert set(got) <= set(ws)
                assert got == sorted(got)


def test_capped_listing_deterministic_given_rng():
    rng1 = Rng(23, "wit")
    rng2 = Rng(23, "wit")
    A = rand_matrix(rng1, 5, 5, 0, 3, 0.1)
    B = rand_matrix(rng1, 5, 5, 0, 3, 0.1)
    rand_matrix(rng2, 5, 5, 0, 3, 0.1)
    rand_matrix(rng2, 5, 5, 0, 3, 0.1)
    r1 = witnesses.list_witnesses_capped(A, B, 2, rng1.split())
    r2 = witnesses.list_witnesses_capped(A, B, 2, rng2.split())
    assert r1.witnesses == r2.witnesses and r1.truncated == r2.truncated


def test_greedy_hitting_set_hits_everything():
    rng = Rng(24, "wit")
    for _ in range(40):
        fam = [{rng.randint(1, 15) for _ in range(rng.randint(1, 6))}
               for _ in range(rng.randint(1, 8))]
        H = witnesses.greedy_hitting_set(fam)
        assert all(set(H) & s for s in fam)
        assert len(H) == len(set(H))


def test_greedy_hitting_set_size_budget():
    # every set of size >= n/s over [1..n]: |H| <= ceil(s ln(m+1)) + 1
    rng = Rng(25, "wit")
    for _ in range(20):
        n = rng.randint(4, 30)
        s = rng.randint(1, 4)
        lo = -(-n // s)  # ceil(n/s)
        m = rng.randint(1, 12)
        fam = []
        for _ in range(m):
            members = list(range(1, n + 1))
            while len(members) > lo:
                members.pop(rng.randrange(len(members)))
            fam.append(set(members))
        H = witnesses.greedy_hitting_set(fam)
        assert len(H) <= math.ceil(s * math.log(m + 1)) + 1


def test_greedy_hitting_set_tie_breaks_small():
    assert witnesses.greedy_hitting_set([{2, 5}, {2, 7}]) == [2]
    assert witnesses.greedy_hitting_set([]) == []
