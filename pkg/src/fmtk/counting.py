"""Counting/detection equivalence pipelines.

Witness counting through Fredman anchors and frequency-split equality
products, min-plus reconstruction from counting callbacks, heavy-witness
convolution counting over a prime field, 3SUM set counting by hashing,
negative-triangle to exact-triangle instance lists, small clique counting,
and modular shortest-path counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import INF, Matrix, TripartiteGraph, random_prime_in
from .products import equality_product, minplus_naive, minplus_convolution_naive
from .witnesses import greedy_hitting_set, list_witnesses_capped


def _equality_counts_safe(A, B):
    """Equality-product counts where INF never equals anything.

    INF entries are remapped to distinct out-of-range sentinels on each
    side before the frequency-split product runs.
    """
    fin = []
    for M in (A, B):
        f = M.a[M.a != INF]
        if f.size:
            fin.append(int(np.abs(f).max()))
    base = max(fin, default=0) + 1
    A2 = Matrix(A.rows, A.cols, np.where(A.a == INF, base + 1, A.a))
    B2 = Matrix(B.rows, B.cols, np.where(B.a == INF, base + 2, B.a))
    return equality_product(A2, B2)


def count_exact_tri_via_anchor(G, t, S):
    """Per-uv-edge counts of weight-t triangles, anchored at nodes of S.

    S holds 1-based X indices.  Returns (counts, valid): counts[i][j] is
    |W_ij| wherever some s in S closes a weight-t triangle with (i,j)
    (valid[i][j] True); other cells are unspecified and flagged invalid.
    """
    n1, n2, n3 = G.n1, G.n2, G.n3
    S = sorted(set(int(s) for s in S))
    if any(s < 1 or s > n2 for s in S):
        raise ValueError("anchor index outside X")
    counts = [[0] * n3 for _ in range(n1)]
    valid = [[False] * n3 for _ in range(n1)]
    anchor = [[0] * n3 for _ in range(n1)]
    for i in range(n1):
        for j in range(n3):
            if G.uv[i, j] == INF:
                continue
            for s in S:
                k = s - 1
                if G.ux[i, k] != INF and G.xv[k, j] != INF and \
                        G.ux[i, k] + G.xv[k, j] + G.uv[i, j] == t:
                    valid[i][j] = True
                    anchor[i][j] = s
                    break
    used = sorted({anchor[i][j] for i in range(n1) for j in range(n3)
                   if valid[i][j]})
    per_anchor = {}
    for s in used:
        k0 = s - 1
        Ak = Matrix(n1, n2)
        Bk = Matrix(n2, n3)
        for k in range(n2):
            for i in range(n1):
                if G.ux[i, k] != INF and G.ux[i, k0] != INF:
                    Ak.a[i, k] = G.ux[i, k] - G.ux[i, k0]
            for j in range(n3):
                if G.xv[k0, j] != INF and G.xv[k, j] != INF:
                    Bk.a[k, j] = G.xv[k0, j] - G.xv[k, j]
        per_anchor[s] = _equality_counts_safe(Ak, Bk)
    for i in range(n1):
        for j in range(n3):
            if valid[i][j]:
                counts[i][j] = per_anchor[anchor[i][j]][i][j]
    return counts, valid


def scan_detector(G, t, cap):
    """Reference detector: per-(i,j) weight-t witness lists, capped.

    Returns (lists, truncated) with 1-based witness indices.
    """
    n1, n2, n3 = G.n1, G.n2, G.n3
    lists = [[[] for _ in range(n3)] for _ in range(n1)]
    truncated = [[False] * n3 for _ in range(n1)]
    for i in range(n1):
        for j in range(n3):
            if G.uv[i, j] == INF:
                continue
            for k in range(n2):
                if G.ux[i, k] != INF and G.xv[k, j] != INF and \
                        G.ux[i, k] + G.xv[k, j] + G.uv[i, j] == t:
                    if len(lists[i][j]) < cap:
                        lists[i][j].append(k + 1)
                    else:
                        truncated[i][j] = True
                        break
    return lists, truncated


def count_ae_exact_tri(G, t, detector=None, cap=None):
    """Exact per-uv-edge counts of weight-t triangles.

    Light cells are counted straight off the detector's capped witness
    lists; heavy (truncated) cells share a greedy hitting set whose
    members become counting anchors.
    """
    n1, n2, n3 = G.n1, G.n2, G.n3
    if cap is None:
        cap = max(1, -(-n2 // 2))
    if detector is None:
        detector = scan_detector
    lists, truncated = detector(G, t, cap)
    counts = [[0] * n3 for _ in range(n1)]
    heavy = []
    heavy_sets = []
    for i in range(n1):
        for j in range(n3):
            ws = lists[i][j]
            for k in ws:
                if not (1 <= k <= n2) or G.ux[i, k - 1] == INF or \
                        G.xv[k - 1, j] == INF or G.uv[i, j] == INF or \
                        G.ux[i, k - 1] + G.xv[k - 1, j] + G.uv[i, j] != t:
                    raise ValueError("detector listed an invalid witness")
            if truncated[i][j]:
                heavy.append((i, j))
                heavy_sets.append(set(ws))
            else:
                counts[i][j] = len(ws)
    if heavy:
        H = greedy_hitting_set(heavy_sets)
        D, valid = count_exact_tri_via_anchor(G, t, H)
        for (i, j) in heavy:
            if not valid[i][j]:
                raise AssertionError("hitting set missed a heavy cell")
            counts[i][j] = D[i][j]
    return counts


def count_minplus_witnesses_via_hitting(A, B, S):
    """Min-plus witness counts anchored at S (1-based inner indices).

    Returns (counts, valid); a cell is valid when its argmin anchor over S
    attains the true product value.
    """
    n1, n2, n3 = A.rows, A.cols, B.cols
    S = sorted(set(int(s) for s in S))
    if any(s < 1 or s > n2 for s in S):
        raise ValueError("anchor index outside range")
    C = minplus_naive(A, B)
    counts = [[0] * n3 for _ in range(n1)]
    valid = [[False] * n3 for _ in range(n1)]
    anchor = [[0] * n3 for _ in range(n1)]
    for i in range(n1):
        for j in range(n3):
            if C[i, j] == INF:
                continue
            best, bs = INF, 0
            for s in S:
                k = s - 1
                if A[i, k] != INF and B[k, j] != INF:
                    v = A[i, k] + B[k, j]
                    if v < best:
                        best, bs = v, s
            if bs and best == C[i, j]:
                valid[i][j] = True
                anchor[i][j] = bs
    used = sorted({anchor[i][j] for i in range(n1) for j in range(n3)
                   if valid[i][j]})
    per_anchor = {}
    for s in used:
        k0 = s - 1
        Ak = Matrix(n1, n2)
        Bk = Matrix(n2, n3)
        for k in range(n2):
            for i in range(n1):
                if A[i, k] != INF and A[i, k0] != INF:
                    Ak.a[i, k] = A[i, k] - A[i, k0]
            for j in range(n3):
                if B[k0, j] != INF and B[k, j] != INF:
                    Bk.a[k, j] = B[k0, j] - B[k, j]
        per_anchor[s] = _equality_counts_safe(Ak, Bk)
    for i in range(n1):
        for j in range(n3):
            if valid[i][j]:
                counts[i][j] = per_anchor[anchor[i][j]][i][j]
    return counts, valid


def count_minplus(A, B, rng, cap=None):
    """Exact per-(i,j) min-plus witness counts."""
    n1, n2, n3 = A.rows, A.cols, B.cols
    if cap is None:
        cap = max(1, -(-n2 // 2))
    rep = list_witnesses_capped(A, B, cap, rng)
    counts = [[0] * n3 for _ in range(n1)]
    heavy = []
    heavy_sets = []
    for i in range(n1):
        for j in range(n3):
            if rep.truncated[i][j]:
                heavy.append((i, j))
                heavy_sets.append(set(rep.witnesses[i][j]))
            else:
                counts[i][j] = len(rep.witnesses[i][j])
    if heavy:
        H = greedy_hitting_set(heavy_sets)
        D, valid = count_minplus_witnesses_via_hitting(A, B, H)
        for (i, j) in heavy:
            if not valid[i][j]:
                raise AssertionError("hitting set missed a heavy cell")
            counts[i][j] = D[i][j]
    return counts


def minplus_from_counting(A, B, counter):
    """Reconstruct the min-plus product from a witness-counting callback.

    Witnesses are uniquified by A'[i,k] = M*A[i,k] + k (1-based k, M > n2);
    each duplication round appends copies of the columns whose 1-based
    index has a given bit set, so the round's count (1 or 2) reveals that
    bit of the unique witness.
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    n1, n2, n3 = A.rows, A.cols, B.cols
    M = n2 + 1
    amax = int(np.abs(A.a[A.a != INF]).max()) if (A.a != INF).any() else 0
    if M * (amax + 1) >= 2 ** 61:
        raise OverflowError("uniquified entries exceed the safe range")
    A1 = Matrix(n1, n2, np.where(A.a != INF,
                                 M * np.where(A.a != INF, A.a, 0)
                                 + np.arange(1, n2 + 1, dtype=np.int64)[None, :],
                                 INF))
    B1 = Matrix(n2, n3, np.where(B.a != INF,
                                 M * np.where(B.a != INF, B.a, 0), INF))
    base = counter(A1, B1)
    nbits = max(1, n2.bit_length())
    kbits = np.zeros((n1, n3), dtype=np.int64)
    for bit in range(nbits):
        dup = [k for k in range(n2) if (k + 1) >> bit & 1]
        if not dup:
            continue
        A2 = Matrix(n1, n2 + len(dup),
                    np.concatenate([A1.a, A1.a[:, dup]], axis=1))
        B2 = Matrix(n2 + len(dup), n3,
                    np.concatenate([B1.a, B1.a[dup, :]], axis=0))
        cnt = counter(A2, B2)
        for i in range(n1):
            for j in range(n3):
                if base[i][j] == 0:
                    if cnt[i][j] != 0:
                        raise ValueError("counter returned inconsistent counts")
                    continue
                c = cnt[i][j]
                if c not in (1, 2):
                    raise ValueError("counter returned a count not in {1,2}")
                if c == 2:
                    kbits[i, j] |= 1 << bit
    C = Matrix(n1, n3)
    for i in range(n1):
        for j in range(n3):
            if base[i][j] == 0:
                continue
            if base[i][j] != 1:
                raise ValueError("uniquified instance has a non-unique witness")
            k = int(kbits[i, j])
            if not (1 <= k <= n2) or A[i, k - 1] == INF or B[k - 1, j] == INF:
                raise ValueError("decoded witness index is invalid")
            C.a[i, j] = A[i, k - 1] + B[k - 1, j]
    return C


# ---------------------------------------------------------------------------
# convolution counting over a prime field

def _conv_interval_graph_mod(Ap, Bp, Cp, p, lo, ell):
    """Tripartite graph whose zero triangles count, per k' = j*ell + iota,
    the witnesses x' in [lo, lo+ell) of A'[x'] + B'[(k'-x') mod p] = C'[k']."""
    nI, nT, nJ = ell, 2 * ell - 1, -(-p // ell)
    ux = Matrix(nI, nT)
    xv = Matrix(nT, nJ)
    uv = Matrix(nI, nJ)
    for i in range(nI):
        for t in range(nT):
            off = i + ell - 1 - t
            x = lo + off
            if 0 <= off < ell and x < p:
                ux.a[i, t] = Ap[x]
    for t in range(nT):
        for j in range(nJ):
            xv.a[t, j] = Bp[(j * ell + t - lo - ell + 1) % p]
    for i in range(nI):
        for j in range(nJ):
            z = j * ell + i
            if z < p:
                uv.a[i, j] = -Cp[z]
    return TripartiteGraph(ux, xv, uv)


def count_3sum_conv_heavy(A, B, C, L, rng):
    """Exact |W_k| for every k (guaranteed for heavy k with |W_k| >= L).

    The arrays are remapped to F_p positions by a random affine map with
    out-of-range padding, positions are cut into ~sqrt(p) intervals, each
    interval becomes a tripartite instance counted through random anchors,
    and any cell the anchors miss is finished by a direct interval scan.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    n = len(A)
    if not (len(B) == len(C) == n):
        raise ValueError("arrays must share one length")
    if n == 0:
        return []
    p = random_prime_in(max(2 * n, 3), max(4 * n, 7), rng)
    x = rng.randint(1, p - 1)
    y = rng.randint(0, p - 1)
    xinv = pow(x, -1, p)
    vals = [abs(v) for arr in (A, B, C) for v in arr if v != INF]
    M = 10 * (max(vals, default=0) + 1)
    Ap = [M] * p
    Bp = [M] * p
    Cp = [3 * M] * p
    for ip in range(p):
        u = (xinv * (ip - y)) % p
        if 1 <= u <= n and A[u - 1] != INF:
            Ap[ip] = A[u - 1]
        v = (xinv * (ip + y)) % p
        if 1 <= v <= n and B[v - 1] != INF:
            Bp[ip] = B[v - 1]
        kk = (xinv * ip) % p
        if 1 <= kk <= n and C[kk - 1] != INF:
            Cp[ip] = C[kk - 1]

    ell = max(1, math.isqrt(p - 1) + 1)
    nT = 2 * ell - 1
    wcnt = np.zeros(p, dtype=np.int64)
    lshare = max(1, (L * ell) // (2 * p) + 1)
    ssize = min(nT, max(1, math.ceil(8 * math.log(p + 2) * ell / lshare)))
    for lo in range(0, p, ell):
        G = _conv_interval_graph_mod(Ap, Bp, Cp, p, lo, ell)
        S = sorted(v + 1 for v in rng.sample(range(nT), ssize))
        D, valid = count_exact_tri_via_anchor(G, 0, S)
        for i in range(ell):
            for j in range(G.n3):
                z = j * ell + i
                if z >= p:
                    continue
                if valid[i][j]:
                    wcnt[z] += D[i][j]
                else:
                    # direct fallback scan over this interval
                    c = 0
                    for off in range(ell):
                        xx = lo + off
                        if xx < p and Ap[xx] + Bp[(z - xx) % p] == Cp[z]:
                            c += 1
                    wcnt[z] += c
    return [int(wcnt[(x * k) % p]) for k in range(1, n + 1)]


def count_all_nums_3sum_conv(A, B, C, detector=None, rng=None, cap=None):
    """Exact per-k counts of a_i + b_{k-i} = c_k (1-based semantics)."""
    n = len(A)
    if cap is None:
        cap = max(1, -(-n // 2))
    lists, truncated = _conv_detect(A, B, C, cap) if detector is None \
        else detector(A, B, C, cap)
    out = [0] * n
    heavy = []
    for k in range(n):
        for i in lists[k]:
            if not (1 <= i < k + 1) or A[i - 1] == INF or \
                    B[k - i] == INF or C[k] == INF or \
                    A[i - 1] + B[k - i] != C[k]:
                raise ValueError("detector listed an invalid witness")
        if truncated[k]:
            heavy.append(k)
        else:
            out[k] = len(lists[k])
    if heavy:
        full = count_3sum_conv_heavy(A, B, C, cap, rng)
        for k in heavy:
            out[k] = full[k]
    return out


def _conv_detect(A, B, C, cap):
    """Reference convolution witness detector (capped lists, 1-based i)."""
    n = len(A)
    lists = [[] for _ in range(n)]
    truncated = [False] * n
    for k in range(n):
        if C[k] == INF:
            continue
        for i in range(1, k + 1):
            if A[i - 1] != INF and B[k - i] != INF and A[i - 1] + B[k - i] == C[k]:
                if len(lists[k]) < cap:
                    lists[k].append(i)
                else:
                    truncated[k] = True
                    break
    return lists, truncated


def count_minplus_conv(a, b, detector=None, rng=None, cap=None):
    """Witness counts of the min-plus convolution of a and b."""
    c = minplus_convolution_naive(a, b)
    return count_all_nums_3sum_conv(list(a), list(b), list(c),
                                    detector=detector, rng=rng, cap=cap)


def minplus_conv_from_counting(a, b, counter):
    """Min-plus convolution reconstructed from a conv-counting callback.

    Witnesses are uniquified by a'[i] = M*a[i] + i, then each bit of the
    witness index is read off an odd/even duplicated instance: position
    2i-1 always carries a'[i], position 2i carries it only when the bit is
    set (INF otherwise), while b' duplicates unconditionally; the count at
    output position 2k-1 is then 1 or 2.
    """
    n = len(a)
    if len(b) != n:
        raise ValueError("length mismatch")
    if n == 0:
        return []
    M = n + 1
    amax = max((abs(v) for v in a if v != INF), default=0)
    if M * (amax + 1) >= 2 ** 61:
        raise OverflowError("uniquified entries exceed the safe range")
    a1 = [M * a[i] + (i + 1) if a[i] != INF else INF for i in range(n)]
    b1 = [M * b[i] if b[i] != INF else INF for i in range(n)]
    base = counter(a1, b1)
    nbits = max(1, n.bit_length())
    kbits = [0] * n
    for bit in range(nbits):
        A2 = [INF] * (2 * n)
        B2 = [INF] * (2 * n)
        for i in range(1, n + 1):
            A2[2 * i - 2] = a1[i - 1]                 # position 2i-1
            if (i >> bit) & 1:
                A2[2 * i - 1] = a1[i - 1]             # position 2i
            B2[2 * i - 2] = b1[i - 1]
            B2[2 * i - 1] = b1[i - 1]
        cnt = counter(A2, B2)
        for k in range(1, n + 1):
            c = cnt[2 * k - 2]                        # output position 2k-1
            if base[k - 1] == 0:
                if c != 0:
                    raise ValueError("counter returned inconsistent counts")
                continue
            if c not in (1, 2):
                raise ValueError("counter returned a count not in {1,2}")
            if c == 2:
                kbits[k - 1] |= 1 << bit
    out = [INF] * n
    for k in range(1, n + 1):
        if base[k - 1] == 0:
            continue
        if base[k - 1] != 1:
            raise ValueError("uniquified instance has a non-unique witness")
        i = kbits[k - 1]
        if not (1 <= i <= k - 1) or a[i - 1] == INF or b[k - i - 1] == INF:
            raise ValueError("decoded witness index is invalid")
        out[k - 1] = a[i - 1] + b[k - i - 1]
    return out


# ---------------------------------------------------------------------------
# All-Nums-3SUM on integer sets

def _layered(values, p):
    buckets = {}
    for v in sorted(values):
        buckets.setdefault(v % p, []).append(v)
    depth = max((len(b) for b in buckets.values()), default=0)
    layers = [dict() for _ in range(depth)]
    for pos, vs in buckets.items():
        for l, v in enumerate(vs):
            layers[l][pos] = v
    return layers


def _pure_conv_counts_at(a0, b0, targets):
    """counts[z] = #{x : a0[x] + b0[z-x] = value planted at z} for the
    requested (z, value) pairs; 0-based pure convolution."""
    m = len(a0)
    av = np.array([v if v != INF else 0 for v in a0], dtype=np.int64)
    afin = np.array([v != INF for v in a0])
    bv = np.array([v if v != INF else 0 for v in b0], dtype=np.int64)
    bfin = np.array([v != INF for v in b0])
    out = {}
    for (z, val) in targets:
        xlo, xhi = max(0, z - m + 1), min(m - 1, z)
        if xlo > xhi:
            out[(z, val)] = 0
            continue
        xs = np.arange(xlo, xhi + 1)
        ys = z - xs
        ok = afin[xs] & bfin[ys]
        out[(z, val)] = int(((av[xs] + bv[ys] == val) & ok).sum())
    return out


def _count_3sum_once(A, B, C, rng):
    n = max(len(A), len(B), len(C), 2)
    p = random_prime_in(2 * n, 4 * n, rng)
    la = _layered(A, p)
    lb = _layered(B, p)
    out = {c: 0 for c in C}
    targets = []
    for c in C:
        targets.append(((c % p), c))
        targets.append(((c % p) + p, c))
    for La in la:
        a0 = [INF] * p
        for pos, v in La.items():
            a0[pos] = v
        for Lb in lb:
            b0 = [INF] * p
            for pos, v in Lb.items():
                b0[pos] = v
            cnts = _pure_conv_counts_at(a0, b0, targets)
            for key, c in zip(targets, [t[1] for t in targets]):
                out[c] += cnts[key]
    return out


def count_all_nums_3sum(A, B, C, rng):
    """Exact #{(a,b) in A x B : a+b=c} for every c in C.

    Values are hashed modulo a random prime into layered convolution
    arrays (one value per slot, targets planted at both feasible
    positions); two independent rounds must agree, otherwise both are
    resampled.
    """
    A, B, C = sorted(set(A)), sorted(set(B)), sorted(set(C))
    for _ in range(10):
        r1 = _count_3sum_once(A, B, C, rng)
        r2 = _count_3sum_once(A, B, C, rng)
        if r1 == r2:
            return r1
    raise AssertionError("hash rounds kept disagreeing")


# ---------------------------------------------------------------------------
# negative triangles -> exact-triangle instances

@dataclass
class ExactTriInstanceList:
    instances: list               # list of (TripartiteGraph, target)


def _ceil_half(M):
    out = Matrix(M.rows, M.cols)
    fin = M.a != INF
    out.a[fin] = -((-M.a[fin]) // 2)
    return out


def _parity_mask(M, odd):
    fin = M.a != INF
    par = np.zeros_like(fin)
    par[fin] = (M.a[fin] % 2) == 1
    return fin & (par == odd)


def _masked(M, mask):
    return Matrix(M.rows, M.cols, np.where(mask, M.a, INF))


def negtri_to_exacttri_instances(G, t):
    """Rewrite per-edge counts of triangles with weight < t as a sum of
    per-edge exact-triangle counts over O(log W) emitted instances.

    Weights are shifted so the condition becomes weight <= 0, then halved
    recursively: ceil-halves keep the <= 0 triangles of one child, and the
    exactly-one overshoots are caught by four odd-parity-pattern instances
    with target 1.
    """
    wmax = 0
    for M in (G.ux, G.xv, G.uv):
        f = M.a[M.a != INF]
        if f.size:
            wmax = max(wmax, int(np.abs(f).max()))
    if max(wmax, abs(t)) > 2 ** 40:
        raise OverflowError("weights above the supported range")
    uv0 = Matrix(G.n1, G.n3,
                 np.where(G.uv.a != INF,
                          np.where(G.uv.a != INF, G.uv.a, 0) - t + 1, INF))
    instances = []

    def rec(ux, xv, uv):
        w = 0
        for M in (ux, xv, uv):
            f = M.a[M.a != INF]
            if f.size:
                w = max(w, int(np.abs(f).max()))
        if w <= 2:
            vals = [sorted(set(int(v) for v in M.a[M.a != INF]))
                    for M in (ux, xv, uv)]
            for w1 in vals[0]:
                for w2 in vals[1]:
                    for w3 in vals[2]:
                        if w1 + w2 + w3 <= 0:
                            g = TripartiteGraph(
                                Matrix(ux.rows, ux.cols, np.where(ux.a == w1, 0, INF)),
                                Matrix(xv.rows, xv.cols, np.where(xv.a == w2, 0, INF)),
                                Matrix(uv.rows, uv.cols, np.where(uv.a == w3, 0, INF)))
                            instances.append((g, 0))
            return
        hux, hxv, huv = _ceil_half(ux), _ceil_half(xv), _ceil_half(uv)
        rec(hux, hxv, huv)
        for pat in ((1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)):
            g = TripartiteGraph(_masked(hux, _parity_mask(ux, pat[0] == 1)),
                                _masked(hxv, _parity_mask(xv, pat[1] == 1)),
                                _masked(huv, _parity_mask(uv, pat[2] == 1)))
            instances.append((g, 1))

    rec(G.ux, G.xv, uv0)
    return ExactTriInstanceList(instances=instances)


# ---------------------------------------------------------------------------
# small clique counting and modular #APSP

def count_exact_k_clique(W, t, k):
    """Number of k-cliques (k in {3,4,5}) whose edge weights sum to t.

    Every (k-3)-subset J is folded into doubled pairwise weights; each
    clique is then seen once per J inside it and 6 times as an ordered
    triangle, so the grand total divides exactly.
    """
    if k not in (3, 4, 5):
        raise ValueError("k must be 3, 4, or 5")
    n = W.rows
    if W.cols != n or n < k:
        raise ValueError("need a square matrix with n >= k")
    total = 0
    from itertools import combinations
    for J in combinations(range(n), k - 3):
        wJ = 0
        ok = True
        for a in range(len(J)):
            for b in range(a + 1, len(J)):
                if W[J[a], J[b]] == INF:
                    ok = False
                else:
                    wJ += W[J[a], J[b]]
        if not ok:
            continue
        rest = [v for v in range(n) if v not in J]
        m = len(rest)
        Wp = Matrix(m, m)
        for ai, u in enumerate(rest):
            for bi, v in enumerate(rest):
                if ai == bi or W[u, v] == INF:
                    continue
                bad = False
                acc = 2 * W[u, v]
                for j in J:
                    if W[j, u] == INF or W[j, v] == INF:
                        bad = True
                        break
                    acc += W[j, u] + W[j, v]
                if not bad:
                    Wp.a[ai, bi] = acc
        tp = 2 * t - 2 * wJ
        G = TripartiteGraph(Wp, Wp, Wp)
        cnts = count_ae_exact_tri(G, tp)
        total += sum(sum(row) for row in cnts) // 6
    denom = math.comb(k, k - 3)
    if total % denom:
        raise AssertionError("clique overcount did not divide evenly")
    return total // denom


def _witness_count_at(A, B, C):
    """cnt[i,j] = #{k : A[i,k]+B[k,j] = C[i,j]} (restricted operands may
    hold INF; C is the reference level)."""
    n1, n3 = A.rows, B.cols
    cnt = np.zeros((n1, n3), dtype=np.int64)
    bfin = B.a != INF
    for i in range(n1):
        afin = A.a[i] != INF
        S = np.where(afin[:, None] & bfin,
                     np.where(afin, A.a[i], 0)[:, None]
                     + np.where(bfin, B.a, 0), INF)
        cnt[i] = ((S == C.a[i][None, :]) & afin[:, None] & bfin
                  & (C.a[i] != INF)[None, :]).sum(axis=0)
    return cnt


def _funny_mod(A, Ac, B, Bc, U):
    """Distance product plus witness-count product mod U via bit splits.

    Counts are decomposed into bits; for each bit pair (p,q) the counts
    of witnesses of the restricted instance at the level of the true
    product contribute 2^(p+q) each.
    """
    C = minplus_naive(A, B)
    nb = max(1, int(Ac.max()).bit_length(), int(Bc.max()).bit_length()) \
        if Ac.size and Bc.size else 1
    out = np.zeros((A.rows, B.cols), dtype=np.int64)
    for pb in range(nb):
        Am = Matrix(A.rows, A.cols,
                    np.where((Ac >> pb & 1).astype(bool) & (A.a != INF), A.a, INF))
        for qb in range(nb):
            Bm = Matrix(B.rows, B.cols,
                        np.where((Bc >> qb & 1).astype(bool) & (B.a != INF), B.a, INF))
            wc = _witness_count_at(Am, Bm, C)
            out = (out + (wc % U) * pow(2, pb + qb, U)) % U
    return C, out % U


def _merge_mod(D1, C1, D2, C2, U):
    D = Matrix(D1.rows, D1.cols, np.minimum(D1.a, D2.a))
    t1 = (D1.a == D.a) & (D.a != INF)
    t2 = (D2.a == D.a) & (D.a != INF)
    C = (np.where(t1, C1, 0) + np.where(t2, C2, 0)) % U
    return D, C


def apsp_count_mod(W, U):
    """Shortest-path counts modulo U for a positive-weight digraph."""
    if U < 2:
        raise ValueError("modulus must be >= 2")
    n = W.rows
    if W.cols != n:
        raise ValueError("square matrix required")
    fin = W.a != INF
    if (W.a[fin] <= 0).any():
        raise ValueError("weights must be strictly positive")
    Deq = W.copy()
    Ceq = (fin.astype(np.int64)) % U
    Dlt = Matrix(n, n, np.where(np.eye(n, dtype=bool), 0, INF))
    Clt = (np.eye(n, dtype=np.int64)) % U
    m = 1
    while m <= n:
        P, Pc = _funny_mod(Dlt, Clt, Deq, Ceq, U)
        Dlt, Clt = _merge_mod(Dlt, Clt, P, Pc, U)
        if 2 * m <= n:
            Deq, Ceq = _funny_mod(Deq, Ceq, Deq, Ceq, U)
        m *= 2
    return [[int(v) for v in row] for row in Clt]
