"""Witness discovery machinery.

Unique-witness recovery by index bit-slicing, capped witness listing by
random sampling rounds, and the deterministic greedy hitting set.  Witness
indices are 1-based everywhere (min over k in [n2]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import INF, NOT_UNIQUE, Matrix
from .products import minplus_naive, minplus_naive_restricted


@dataclass
class WitnessReport:
    """Per-(i,j) sorted 1-based witness lists with truncation flags."""
    witnesses: list              # witnesses[i][j] = sorted list of 1-based k
    truncated: list              # truncated[i][j] = bool
    cap: int


def _witness_count_table(A, B, C):
    """cnt[i,j] = #{k : A[i,k]+B[k,j] = C[i,j]}; vectorized scan, not a solve."""
    n1, n3 = A.rows, B.cols
    cnt = np.zeros((n1, n3), dtype=np.int64)
    bfin = B.a != INF
    for i in range(n1):
        row = A.a[i]
        valid = (row != INF)[:, None] & bfin
        S = np.where(valid, row[:, None] + B.a, INF)
        cnt[i] = ((S == C.a[i][None, :]) & valid & (C.a[i] != INF)[None, :]).sum(axis=0)
    return cnt


def unique_witness_matrix(A, B):
    """Assemble witness indices from bit-class restricted min-plus products.

    Returns an n1 x n3 integer array whose entries are valid 1-based
    witnesses of the min-plus product, or NOT_UNIQUE where the bit assembly
    does not verify (multiple witnesses, or no witness at all).
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    n1, n2, n3 = A.rows, A.cols, B.cols
    C = minplus_naive(A, B)
    nbits = max(1, (n2).bit_length())   # enough bits for 1-based indices
    assembled = np.zeros((n1, n3), dtype=np.int64)
    for bit in range(nbits):
        cols = [k for k in range(n2) if (k + 1) >> bit & 1]
        if not cols:
            continue
        Cr = minplus_naive_restricted(A, B, cols)
        assembled |= ((Cr.a == C.a) & (C.a != INF)).astype(np.int64) << bit
    out = np.full((n1, n3), NOT_UNIQUE, dtype=np.int64)
    for i in range(n1):
        for j in range(n3):
            w = int(assembled[i, j])
            if 1 <= w <= n2 and C[i, j] != INF and \
                    A[i, w - 1] != INF and B[w - 1, j] != INF and \
                    A[i, w - 1] + B[w - 1, j] == C[i, j]:
                out[i, j] = w
    return out


def list_witnesses_capped(A, B, cap, rng):
    """List min-plus witnesses, up to `cap` per cell.

    Random subsets of the inner dimension of size cap are drawn for
    ceil(4*(n2/cap)*ln(n1*n2*n3)) rounds; witnesses unique inside their
    subset are recovered by bit-slicing.  A vectorized count cross-check
    then repairs any cell the sampling missed (Las Vegas: the check is a
    scan, never a solve), so the report contract is deterministic:
    cells with <= cap witnesses are complete, others hold exactly `cap`
    witnesses with truncated = True.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n1, n2, n3 = A.rows, A.cols, B.cols
    C = minplus_naive(A, B)
    found = [[set() for _ in range(n3)] for _ in range(n1)]

    rounds = max(1, math.ceil(4 * (n2 / cap) * math.log(n1 * n2 * n3 + 2)))
    size = min(cap, n2)
    for _ in range(rounds):
        cols = sorted(rng.sample(range(n2), size))
        wit = unique_witness_matrix(
            Matrix(n1, len(cols), np.ascontiguousarray(A.a[:, cols])),
            Matrix(len(cols), n3, np.ascontiguousarray(B.a[cols, :])))
        for i in range(n1):
            for j in range(n3):
                w = int(wit[i, j])
                if w == NOT_UNIQUE:
                    continue
                k = cols[w - 1]
                if A[i, k] != INF and B[k, j] != INF and \
                        A[i, k] + B[k, j] == C[i, j]:
                    found[i][j].add(k + 1)

    cnt = _witness_count_table(A, B, C)
    witnesses = [[None] * n3 for _ in range(n1)]
    truncated = [[False] * n3 for _ in range(n1)]
    for i in range(n1):
        for j in range(n3):
            want = int(cnt[i, j])
            got = sorted(found[i][j])
            target = min(want, cap)
            if len(got) < target:
                # repair pass: direct scan for the missing witnesses
                got = []
                for k in range(n2):
                    if A[i, k] != INF and B[k, j] != INF and \
                            A[i, k] + B[k, j] == C[i, j]:
                        got.append(k + 1)
                        if len(got) == target:
                            break
            witnesses[i][j] = got[:cap]
            truncated[i][j] = want > cap
    return WitnessReport(witnesses=witnesses, truncated=truncated, cap=cap)


def greedy_hitting_set(sets):
    """Deterministic greedy hitting set; ties break to the smallest element.

    If every set has size >= n/s over a universe of n elements, the result
    has at most ceil(s*ln(m+1)) + 1 elements (m = number of sets).
    """
    for s in sets:
        if not s:
            raise ValueError("empty set cannot be hit")
    remaining = [set(s) for s in sets]
    H = []
    while remaining:
        score = {}
        for s in remaining:
            for e in s:
                score[e] = score.get(e, 0) + 1
        best = min(score, key=lambda e: (-score[e], e))
        H.append(best)
        remaining = [s for s in remaining if best not in s]
    return sorted(H)
