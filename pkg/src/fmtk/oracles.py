"""Brute-force reference implementations.

Every acceptance test compares a fast path against exactly one function from
this file.  These are deliberately plain exhaustive enumerations over the
problem definitions, share nothing with the fast paths beyond the core value
types, and refuse super-desk sizes so nobody accidentally benchmarks them.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from .core import INF, Matrix, ext_add, is_fin

_MAX_MATRIX_N = 64
_MAX_ARRAY_N = 2048
_MAX_CLIQUE_N = 16


def _guard(cond, what):
    if not cond:
        raise ValueError("oracle size guard exceeded: " + what)


def brute_minplus(A, B):
    _guard(max(A.rows, A.cols, B.cols) <= _MAX_MATRIX_N, "brute_minplus")
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    C = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        for j in range(B.cols):
            best = INF
            for k in range(A.cols):
                a, b = A[i, k], B[k, j]
                if a != INF and b != INF:
                    best = min(best, a + b)
            C.a[i, j] = best
    return C


def brute_minplus_conv(a, b):
    """1-based semantics: c_i = min over j in [i-1] of a_j + b_{i-j}."""
    _guard(len(a) <= _MAX_ARRAY_N, "brute_minplus_conv")
    n = len(a)
    c = [INF] * n
    for m in range(n):            # m = 1-based i minus 1
        best = INF
        for j in range(m):        # a index j (0-based), b index m-1-j
            if a[j] != INF and b[m - 1 - j] != INF:
                best = min(best, a[j] + b[m - 1 - j])
        c[m] = best
    return c


def brute_min_equal_conv(a, b):
    """1-based semantics: c_i = min{a_j : j in [i-1], a_j = b_{i-j}}."""
    _guard(len(a) <= _MAX_ARRAY_N, "brute_min_equal_conv")
    n = len(a)
    c = [INF] * n
    for m in range(n):
        best = INF
        for j in range(m):
            if a[j] != INF and a[j] == b[m - 1 - j]:
                best = min(best, a[j])
        c[m] = best
    return c


def brute_3sum_conv_counts(a, b, c):
    """|W_k| = #{i in [k-1] : a_i + b_{k-i} = c_k} per 1-based k."""
    _guard(len(a) <= _MAX_ARRAY_N, "brute_3sum_conv_counts")
    n = len(a)
    out = [0] * n
    for m in range(n):
        if c[m] == INF:
            continue
        cnt = 0
        for j in range(m):
            if a[j] != INF and b[m - 1 - j] != INF and a[j] + b[m - 1 - j] == c[m]:
                cnt += 1
        out[m] = cnt
    return out


def brute_dominance(A, B):
    _guard(max(A.rows, A.cols, B.cols) <= _MAX_MATRIX_N, "brute_dominance")
    C = [[0] * B.cols for _ in range(A.rows)]
    for i in range(A.rows):
        for j in range(B.cols):
            C[i][j] = sum(1 for k in range(A.cols) if A[i, k] <= B[k, j])
    return C


def brute_equality(A, B):
    _guard(max(A.rows, A.cols, B.cols) <= _MAX_MATRIX_N, "brute_equality")
    C = [[0] * B.cols for _ in range(A.rows)]
    for i in range(A.rows):
        for j in range(B.cols):
            C[i][j] = sum(1 for k in range(A.cols)
                          if A[i, k] != INF and A[i, k] == B[k, j])
    return C


def brute_gen_equality(A, Ap, B, Bp):
    """min over {k : A[i,k] = B[k,j], both finite} of A'[i,k] + B'[k,j]."""
    _guard(max(A.rows, A.cols, B.cols) <= _MAX_MATRIX_N, "brute_gen_equality")
    C = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        for j in range(B.cols):
            best = INF
            for k in range(A.cols):
                if A[i, k] != INF and A[i, k] == B[k, j]:
                    best = min(best, ext_add(Ap[i, k], Bp[k, j]))
            C.a[i, j] = best
    return C


def brute_minplus_witness_counts(A, B):
    _guard(max(A.rows, A.cols, B.cols) <= _MAX_MATRIX_N, "brute_minplus_witness_counts")
    C = brute_minplus(A, B)
    D = [[0] * B.cols for _ in range(A.rows)]
    for i in range(A.rows):
        for j in range(B.cols):
            if C[i, j] == INF:
                continue
            D[i][j] = sum(1 for k in range(A.cols)
                          if A[i, k] != INF and B[k, j] != INF
                          and A[i, k] + B[k, j] == C[i, j])
    return D


def brute_minplus_witness_sets(A, B):
    """Per (i,j): sorted list of 1-based witness indices of the min-plus product."""
    _guard(max(A.rows, A.cols, B.cols) <= _MAX_MATRIX_N, "brute_minplus_witness_sets")
    C = brute_minplus(A, B)
    W = [[[] for _ in range(B.cols)] for _ in range(A.rows)]
    for i in range(A.rows):
        for j in range(B.cols):
            if C[i, j] == INF:
                continue
            W[i][j] = [k + 1 for k in range(A.cols)
                       if A[i, k] != INF and B[k, j] != INF
                       and A[i, k] + B[k, j] == C[i, j]]
    return W, C


def brute_zero_triangle_list(G, t):
    """All triangles (i,k,j) of weight exactly t, 0-based part indices."""
    _guard(max(G.n1, G.n2, G.n3) <= _MAX_MATRIX_N, "brute_zero_triangle_list")
    out = []
    for i in range(G.n1):
        for k in range(G.n2):
            if G.ux[i, k] == INF:
                continue
            for j in range(G.n3):
                w = G.triangle_weight(i, k, j)
                if w != INF and w == t:
                    out.append((i, k, j))
    return out


def brute_exact_tri_counts(G, t):
    """Per-(i,j) count of triangles of weight exactly t through uv edge (i,j)."""
    _guard(max(G.n1, G.n2, G.n3) <= _MAX_MATRIX_N, "brute_exact_tri_counts")
    D = [[0] * G.n3 for _ in range(G.n1)]
    for (i, k, j) in brute_zero_triangle_list(G, t):
        D[i][j] += 1
    return D


def brute_negative_triangle_counts(G, t):
    """Per-(i,j) count of triangles with weight < t."""
    _guard(max(G.n1, G.n2, G.n3) <= _MAX_MATRIX_N, "brute_negative_triangle_counts")
    D = [[0] * G.n3 for _ in range(G.n1)]
    for i in range(G.n1):
        for k in range(G.n2):
            if G.ux[i, k] == INF:
                continue
            for j in range(G.n3):
                w = G.triangle_weight(i, k, j)
                if w != INF and w < t:
                    D[i][j] += 1
    return D


def brute_3sum_counts(A, B, C):
    """{c: #{(a,b) in A x B : a+b=c}} for plain integer sets."""
    _guard(max(len(A), len(B), len(C)) <= _MAX_ARRAY_N, "brute_3sum_counts")
    out = {}
    bs = set(B)
    for c in C:
        out[c] = sum(1 for a in A if (c - a) in bs)
    return out


def brute_sumset(A, B):
    _guard(len(A) * len(B) <= _MAX_ARRAY_N * _MAX_ARRAY_N, "brute_sumset")
    return {a + b for a in A for b in B}


def brute_apsp_count(W):
    """Exact distances and shortest-path counts (python ints).

    W is an n x n weight Matrix (INF = no edge, diagonal ignored); weights
    must be positive so shortest walks are simple.  Distances come from
    Floyd-Warshall; counts from a DP over targets sorted by distance
    (predecessors on a shortest path are strictly closer).  Returns
    (dist rows, count rows).
    """
    n = W.rows
    _guard(n <= _MAX_MATRIX_N, "brute_apsp_count")
    dist = [[0 if i == j else (W[i, j] if W[i, j] != INF else INF)
             for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            row_k = dist[k]
            row_i = dist[i]
            for j in range(n):
                if row_k[j] != INF and dik + row_k[j] < row_i[j]:
                    row_i[j] = dik + row_k[j]
    cnt = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        targets = sorted(range(n), key=lambda j: (dist[i][j] == INF, dist[i][j]))
        for j in targets:
            if j == i or dist[i][j] == INF:
                continue
            total = 0
            for k in range(n):
                if W[k, j] == INF or k == j:
                    continue
                if dist[i][k] != INF and dist[i][k] + W[k, j] == dist[i][j]:
                    total += cnt[i][k]
            cnt[i][j] = total
    return dist, cnt


def brute_range_mode(S, queries):
    """Per query (lo, hi): (mode symbol, frequency) over S[lo:hi], 0-based."""
    out = []
    for lo, hi in queries:
        freq = {}
        for sym in S[lo:hi]:
            freq[sym] = freq.get(sym, 0) + 1
        if not freq:
            out.append((None, 0))
            continue
        best = max(freq.items(), key=lambda kv: (kv[1], -kv[0]))
        out.append(best)
    return out


def brute_lex_shortest_path(n_nodes, edges, sources, targets):
    """Hops-then-weight lexicographic shortest paths (undirected).

    edges: list of (u, v, w).  Returns {(s, t): (hops, weight)} for all
    requested pairs, absent key = unreachable.
    """
    adj = [[] for _ in range(n_nodes)]
    for u, v, w in edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    out = {}
    tset = set(targets)
    for s in sources:
        dist = {s: (0, 0)}
        pq = [(0, 0, s)]
        while pq:
            h, w, u = heapq.heappop(pq)
            if dist.get(u) != (h, w):
                continue
            for v, ew in adj[u]:
                cand = (h + 1, w + ew)
                if v not in dist or cand < dist[v]:
                    dist[v] = cand
                    heapq.heappush(pq, (cand[0], cand[1], v))
        for t in tset:
            if t in dist:
                out[(s, t)] = dist[t]
    return out


def brute_popularity(A, x):
    """pop_A(x) over the (index, value) group; A an IndexedSet, x = (d, v)."""
    d, v = x
    cnt = 0
    for i, a in A.members():
        j = i - d
        if 1 <= j <= A.n and A.get(j) != INF and a - v == A.get(j):
            cnt += 1
    return cnt


def brute_qualifying_pairs(A, C):
    """Ordered pairs (a, b) in A x A (as 1-based index pairs) with a-b in C."""
    out = []
    mem = A.members()
    cvals = {}
    for k, c in C.members():
        cvals[k] = c
    for i, ai in mem:
        for j, aj in mem:
            d = i - j
            if d in cvals and ai - aj == cvals[d]:
                out.append((i, j))
    return out


def brute_popular_pairs(A, s):
    """Ordered pairs (a, b) in A x A with pop_A(a-b) > n/s (1-based index pairs)."""
    mem = A.members()
    pop = {}
    for i, ai in mem:
        for j, aj in mem:
            key = (i - j, ai - aj)
            pop[key] = pop.get(key, 0) + 1
    thresh = A.n / s
    out = []
    for i, ai in mem:
        for j, aj in mem:
            if pop[(i - j, ai - aj)] > thresh:
                out.append((i, j))
    return out


def brute_cover_check(cover, qualifying_pairs):
    """True iff every qualifying ordered pair is in R or inside some subset square."""
    rem = set(cover.remainder)
    subset_sets = [set(sub) for sub in cover.subsets]
    for (i, j) in qualifying_pairs:
        if (i, j) in rem:
            continue
        if any(i in sub and j in sub for sub in subset_sets):
            continue
        return False
    return True


def brute_k_clique_count(W, t, k):
    """Number of k-subsets of the complete weighted graph with edge sum t."""
    n = W.rows
    _guard(n <= _MAX_CLIQUE_N, "brute_k_clique_count")
    cnt = 0
    for sub in combinations(range(n), k):
        w = 0
        ok = True
        for a, b in combinations(sub, 2):
            e = W[a, b]
            if e == INF:
                ok = False
                break
            w += e
        if ok and w == t:
            cnt += 1
    return cnt


def brute_funny_product(A, Ap, B, Bp):
    """C = min-plus(A,B); C'[i,j] = sum over witnesses k of A'[i,k]*B'[k,j]."""
    C = brute_minplus(A, B)
    Cp = [[0] * B.cols for _ in range(A.rows)]
    for i in range(A.rows):
        for j in range(B.cols):
            if C[i, j] == INF:
                continue
            tot = 0
            for k in range(A.cols):
                if A[i, k] != INF and B[k, j] != INF and A[i, k] + B[k, j] == C[i, j]:
                    tot += Ap[i][k] * Bp[k][j]
            Cp[i][j] = tot
    return C, Cp
