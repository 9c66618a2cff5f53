"""Triangle decomposition and its applications.

The decomposition splits the zero-weight (= target-weight) triangles of a
tripartite graph into a small remainder R plus "pure" subgraphs, grouped
into categories sharing a Fredman anchor k0.  Every triangle inside a
subgraph has weight exactly the target, and each zero triangle of the
source graph appears exactly once across R and the subgraphs, which is
what makes per-edge counting (the funny product, #APSP, preprocessed
universes, bounded-difference min-plus) exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import INF, Matrix, Rng, TripartiteGraph, random_prime_in
from .products import minplus_naive, minplus_bounded
from .witnesses import greedy_hitting_set


@dataclass
class Category:
    k0: int                       # 0-based anchor index into X
    uv_mask: np.ndarray           # (n1, n3) bool: uv edges assigned to k0
    subgraphs: list               # list of (ux_mask (n1,n2), xv_mask (n2,n3))


@dataclass
class TriangleDecomposition:
    n1: int
    n2: int
    n3: int
    s: int
    r: int
    target: int
    H: list                       # hitting set, 0-based
    categories: list              # list of Category
    remainder: list               # list of (i, k, j) 0-based triangles
    _G: TripartiteGraph = field(repr=False, default=None)
    _sums: np.ndarray = field(repr=False, default=None)

    def subgraph_count(self):
        return sum(len(c.subgraphs) for c in self.categories)

    def to_json(self):
        return {
            "categories": [{
                "k0": c.k0,
                "uv_edges": [[int(i), int(j)] for i, j in zip(*np.nonzero(c.uv_mask))],
                "subgraphs": [{
                    "ux": [[int(i), int(k)] for i, k in zip(*np.nonzero(ux))],
                    "xv": [[int(k), int(j)] for k, j in zip(*np.nonzero(xv))],
                } for ux, xv in c.subgraphs],
            } for c in self.categories],
            "remainder": [[i, k, j] for (i, k, j) in self.remainder],
        }


def _pair_sums(G):
    """sums[i, k, j] = ux[i,k] + xv[k,j] (INF where either absent).

    This is the uv-independent preprocessing shared by build and update.
    """
    n1, n2, n3 = G.n1, G.n2, G.n3
    sums = np.full((n1, n2, n3), INF, dtype=np.int64)
    afin = G.ux.a != INF
    bfin = G.xv.a != INF
    for k in range(n2):
        valid = afin[:, k][:, None] & bfin[k][None, :]
        s = np.where(afin[:, k], G.ux.a[:, k], 0)[:, None] + \
            np.where(bfin[k], G.xv.a[k], 0)[None, :]
        sums[:, k, :] = np.where(valid, s, INF)
    return sums


def triangle_decomposition(G, target, s):
    if not (1 <= s <= G.n2):
        raise ValueError("need 1 <= s <= n2")
    sums = _pair_sums(G)
    return _decompose_from_sums(G, sums, target, s)


def _decompose_from_sums(G, sums, target, s):
    n1, n2, n3 = G.n1, G.n2, G.n3
    r = s * s

    # c[i,j] = target - uv[i,j]: witnesses are k with ux+xv = c
    uvfin = G.uv.a != INF
    c = np.where(uvfin, target - np.where(uvfin, G.uv.a, 0), INF)

    wit = (sums == c[:, None, :]) & uvfin[:, None, :] & (c != INF)[:, None, :]
    cnt = wit.sum(axis=1)

    remainder = []
    few = cnt * s <= n2          # |W_ij| <= n2/s
    for i, j in zip(*np.nonzero(few & (cnt > 0))):
        for k in np.nonzero(wit[i, :, j])[0]:
            remainder.append((int(i), int(k), int(j)))

    large = ~few
    large_cells = list(zip(*np.nonzero(large)))
    categories = []
    if large_cells:
        trunc = n2 // s + 1
        sets = []
        for (i, j) in large_cells:
            ks = np.nonzero(wit[i, :, j])[0][:trunc]
            sets.append(set(int(k) for k in ks))
        H = greedy_hitting_set(sets)

        k0_of = {}
        for (i, j), ks in zip(large_cells, sets):
            # anchor at the smallest hitting-set member of the (truncated)
            # witness set; greedy guarantees at least one
            k0_of[(i, j)] = min(ks.intersection(H))

        bfin = G.xv.a != INF
        afin = G.ux.a != INF
        for k0 in H:
            cells = [(i, j) for (i, j) in large_cells if k0_of[(i, j)] == k0]
            if not cells:
                continue
            uv_mask = np.zeros((n1, n3), dtype=bool)
            for (i, j) in cells:
                uv_mask[i, j] = True

            # F[k] = sorted high-frequency values of {xv[k0,j] - xv[k,j]}
            F = []
            occ_all = []
            row0 = G.xv.a[k0]
            for k in range(n2):
                occ = {}
                valid = bfin[k0] & bfin[k]
                diffs = row0 - G.xv.a[k]
                for j in np.nonzero(valid)[0]:
                    occ.setdefault(int(diffs[j]), []).append(int(j))
                Fk = sorted(v for v, js in occ.items() if len(js) * r > n3)
                F.append(Fk)
                occ_all.append(occ)

            # low-frequency scan: matching j's of non-popular differences
            col0 = G.ux.a[:, k0]
            for i in range(n1):
                if col0[i] == INF:
                    continue
                for k in range(n2):
                    if not afin[i, k]:
                        continue
                    f = int(G.ux.a[i, k] - col0[i])
                    if f in F[k]:
                        continue
                    for j in occ_all[k].get(f, ()):
                        if uv_mask[i, j]:
                            remainder.append((i, k, j))

            maxp = max((len(Fk) for Fk in F), default=0)
            subgraphs = []
            for p in range(maxp):
                ux_mask = np.zeros((n1, n2), dtype=bool)
                xv_mask = np.zeros((n2, n3), dtype=bool)
                nonempty = False
                for k in range(n2):
                    if p >= len(F[k]):
                        continue
                    fval = F[k][p]
                    ok = afin[:, k] & (col0 != INF)
                    diff = np.where(ok, G.ux.a[:, k] - np.where(ok, col0, 0), 0)
                    sel_i = ok & (diff == fval)
                    ux_mask[:, k] = sel_i
                    for j in occ_all[k].get(fval, ()):
                        xv_mask[k, j] = True
                    if sel_i.any() or xv_mask[k].any():
                        nonempty = True
                if nonempty:
                    subgraphs.append((ux_mask, xv_mask))
            categories.append(Category(k0=k0, uv_mask=uv_mask, subgraphs=subgraphs))
    else:
        H = []

    remainder.sort()
    return TriangleDecomposition(n1=n1, n2=n2, n3=n3, s=s, r=r, target=target,
                                 H=sorted(H) if large_cells else [],
                                 categories=categories, remainder=remainder,
                                 _G=G, _sums=sums)


def decomposition_update_uv(D, G):
    """Recompute the uv-dependent phase; ux/xv must be unchanged."""
    if not (np.array_equal(D._G.ux.a, G.ux.a) and np.array_equal(D._G.xv.a, G.xv.a)):
        raise ValueError("only uv weights may change in an update")
    return _decompose_from_sums(G, D._sums, D.target, D.s)


def decomposition_triangles(D):
    """All triangles across R and the subgraphs (testing helper)."""
    out = list(D.remainder)
    for cat in D.categories:
        for ux_mask, xv_mask in cat.subgraphs:
            for i, k in zip(*np.nonzero(ux_mask)):
                for j in np.nonzero(xv_mask[k])[0]:
                    if cat.uv_mask[i, j]:
                        out.append((int(i), int(k), int(j)))
    return out


# ---------------------------------------------------------------------------
# preprocessed-universe Exact-Triangle

@dataclass
class EdgeMask:
    ux: np.ndarray
    xv: np.ndarray
    uv: np.ndarray


def full_mask(G):
    return EdgeMask(ux=G.ux.a != INF, xv=G.xv.a != INF, uv=G.uv.a != INF)


class PreprocessedExactTri:
    def __init__(self, G, s):
        self.G = G
        self.s = s
        self._sums = _pair_sums(G)
        self._decomps = {}

    def decomp(self, target):
        if target not in self._decomps:
            self._decomps[target] = _decompose_from_sums(
                self.G, self._sums, target, self.s)
        return self._decomps[target]


def preprocessed_exact_tri_build(G, s):
    return PreprocessedExactTri(G, s)


def _masked_category_counts(D, mask, want_counts):
    """Per-uv-edge triangle counts (or flags) inside the masked subgraph."""
    n1, n3 = D.n1, D.n3
    out = np.zeros((n1, n3), dtype=np.int64)
    for (i, k, j) in D.remainder:
        if mask.ux[i, k] and mask.xv[k, j] and mask.uv[i, j]:
            out[i, j] += 1
    for cat in D.categories:
        uv_m = cat.uv_mask & mask.uv
        if not uv_m.any() or not cat.subgraphs:
            continue
        # expanded middle layer: stack the category's subgraphs side by side
        left = np.concatenate(
            [(ux & mask.ux).astype(np.int64) for ux, _ in cat.subgraphs], axis=1)
        right = np.concatenate(
            [(xv & mask.xv).astype(np.int64) for _, xv in cat.subgraphs], axis=0)
        prod = left @ right
        out += np.where(uv_m, prod, 0)
    if want_counts:
        return out
    return out > 0


def preprocessed_exact_tri_query(handle, mask, target):
    G = handle.G
    if mask.ux.shape != (G.n1, G.n2) or mask.xv.shape != (G.n2, G.n3) \
            or mask.uv.shape != (G.n1, G.n3):
        raise ValueError("mask shape mismatch")
    D = handle.decomp(target)
    flags = _masked_category_counts(D, mask, want_counts=False)
    return [[bool(v) for v in row] for row in flags]


def preprocessed_exact_tri_query_counts(handle, mask, target):
    D = handle.decomp(target)
    cnts = _masked_category_counts(D, mask, want_counts=True)
    return [[int(v) for v in row] for row in cnts]


# ---------------------------------------------------------------------------
# preprocessed-universe 3SUM (deterministic query path)

def _layered_positions(values, p):
    """Bucket values by (v mod p); returns list of layers, each a dict
    position -> value, so every (layer, position) slot holds one value."""
    buckets = {}
    for v in sorted(values):
        buckets.setdefault(v % p, []).append(v)
    depth = max((len(b) for b in buckets.values()), default=0)
    layers = [dict() for _ in range(depth)]
    for pos, vals in buckets.items():
        for l, v in enumerate(vals):
            layers[l][pos] = v
    return layers


def _conv_interval_graph(a0, b0, c0, lo, ell):
    """Tripartite graph counting, per z, the witnesses x in [lo, lo+ell).

    a0, b0, c0 are 0-based arrays (INF = absent); pairs are x + y = z with
    a0[x] + b0[y] = c0[z].  Parts: I = z offset in its block, T = x offset
    encoder, J = z block.  Per-(I_i, J_j) zero-triangle count at target 0
    equals |W_z ∩ [lo, lo+ell)| for z = j*ell + i.
    """
    m_a, m_z = len(a0), len(c0)
    nI, nT, nJ = ell, 2 * ell - 1, -(-m_z // ell)
    ux = Matrix(nI, nT)
    xv = Matrix(nT, nJ)
    uv = Matrix(nI, nJ)
    for i in range(nI):
        for t in range(nT):
            off = i + ell - 1 - t
            x = lo + off
            if 0 <= off < ell and 0 <= x < m_a:
                ux.a[i, t] = a0[x]
    for t in range(nT):
        for j in range(nJ):
            y = j * ell + t - lo - ell + 1
            if 0 <= y < len(b0):
                xv.a[t, j] = b0[y]
    for i in range(nI):
        for j in range(nJ):
            z = j * ell + i
            if z < m_z and c0[z] != INF:
                uv.a[i, j] = -c0[z]
    return TripartiteGraph(ux, xv, uv)


class Preprocessed3Sum:
    """All-Nums-3SUM on preprocessed universes A, B, C.

    Values are hashed to array positions by v mod p (random prime, fixed
    internal seed for determinism), with bucket collisions split into
    layers so every slot holds one value; each target value is planted at
    both of its two feasible positions.  Every layer triple becomes a
    0-based convolution instance, cut into per-interval tripartite graphs
    that are triangle-decomposed once; queries only mask edges.
    """

    def __init__(self, A, B, C, q=None, s=2):
        rng = Rng(0xF3D, "preprocessed-3sum")
        self.A, self.B, self.C = set(A), set(B), set(C)
        n = max(len(self.A), len(self.B), len(self.C), 2)
        self.p = random_prime_in(2 * n, 4 * n, rng)
        p = self.p
        self.layers_a = _layered_positions(self.A, p)
        self.layers_b = _layered_positions(self.B, p)
        # target copies at z = (c mod p) and z = (c mod p) + p
        self.layers_c = _layered_positions(self.C, p)
        m_ab = p
        m_z = 2 * p - 1
        self.m_ab, self.m_z = m_ab, m_z
        self.q = q if q is not None else max(1, math.isqrt(m_z - 1) + 1)
        self.s = s
        self.instances = []    # (la, lb, lc, lo, handle)
        for la, La in enumerate(self.layers_a):
            a0 = [INF] * m_ab
            for pos, v in La.items():
                a0[pos] = v
            for lb, Lb in enumerate(self.layers_b):
                b0 = [INF] * m_ab
                for pos, v in Lb.items():
                    b0[pos] = v
                for lc, Lc in enumerate(self.layers_c):
                    c0 = [INF] * m_z
                    for pos, v in Lc.items():
                        c0[pos] = v
                        if pos + p < m_z:
                            c0[pos + p] = v
                    for lo in range(0, m_ab, self.q):
                        G = _conv_interval_graph(a0, b0, c0, lo, self.q)
                        h = preprocessed_exact_tri_build(G, self.s)
                        h.decomp(0)
                        self.instances.append((la, lb, lc, lo, G, h))


def preprocessed_3sum_build(A, B, C, q=None):
    return Preprocessed3Sum(A, B, C, q=q)


def preprocessed_3sum_query(handle, Ap, Bp, Cp):
    """Per-c' counts of a'+b'=c' with a' in A', b' in B'."""
    Ap, Bp, Cp = set(Ap), set(Bp), set(Cp)
    for sub, uni, name in ((Ap, handle.A, "A"), (Bp, handle.B, "B"),
                           (Cp, handle.C, "C")):
        if not sub <= uni:
            raise ValueError("query elements outside universe " + name)
    out = {c: 0 for c in Cp}
    p = handle.p
    for la, lb, lc, lo, G, h in handle.instances:
        La = handle.layers_a[la]
        Lb = handle.layers_b[lb]
        Lc = handle.layers_c[lc]
        mask = full_mask(G)
        # rebuild edge masks from membership of the underlying values
        q = handle.q
        for i in range(G.n1):
            for t in range(G.n2):
                if G.ux[i, t] == INF:
                    continue
                x = lo + (i + q - 1 - t)
                if La.get(x) not in Ap:
                    mask.ux[i, t] = False
        for t in range(G.n2):
            for j in range(G.n3):
                if G.xv[t, j] == INF:
                    continue
                y = j * q + t - lo - q + 1
                if Lb.get(y) not in Bp:
                    mask.xv[t, j] = False
        zvals = {}
        for pos, v in Lc.items():
            zvals[pos] = v
            if pos + p < handle.m_z:
                zvals[pos + p] = v
        for i in range(G.n1):
            for j in range(G.n3):
                if G.uv[i, j] == INF:
                    continue
                z = j * q + i
                if zvals.get(z) not in Cp:
                    mask.uv[i, j] = False
        cnts = preprocessed_exact_tri_query_counts(h, mask, 0)
        for i in range(G.n1):
            for j in range(G.n3):
                v = cnts[i][j]
                if v:
                    out[zvals[j * q + i]] += v
    return out


# ---------------------------------------------------------------------------
# funny product and #APSP

def funny_product(A, Ap, B, Bp, s=None):
    """C = min-plus(A, B); C'[i,j] = sum over witnesses k of A'[i,k]*B'[k,j].

    A'/B' are nonnegative arbitrary-precision counts (list of lists).
    Computed through a triangle decomposition: remainder triangles are
    added directly, pure subgraphs by exact integer matmuls over the
    expanded middle layer.
    """
    C = minplus_naive(A, B)
    n1, n2, n3 = A.rows, A.cols, B.cols
    if s is None:
        s = max(1, math.isqrt(n2))
    neg_c = Matrix(n1, n3, np.where(C.a != INF, -C.a, INF))
    G = TripartiteGraph(A, B, neg_c)
    D = triangle_decomposition(G, 0, s)
    Cp = [[0] * n3 for _ in range(n1)]
    for (i, k, j) in D.remainder:
        Cp[i][j] += Ap[i][k] * Bp[k][j]
    for cat in D.categories:
        for ux_mask, xv_mask in cat.subgraphs:
            # exact integer matmul of the masked count matrices
            for i in range(n1):
                row = [Ap[i][k] if ux_mask[i, k] else 0 for k in range(n2)]
                if not any(row):
                    continue
                for j in range(n3):
                    if not cat.uv_mask[i, j]:
                        continue
                    tot = 0
                    for k in range(n2):
                        if row[k] and xv_mask[k, j]:
                            tot += row[k] * Bp[k][j]
                    Cp[i][j] += tot
    return C, Cp


def _merge_pair(D1, C1, D2, C2):
    """(min, +)-merge two (distance, count) pairs; counts add on ties."""
    n1, n3 = D1.rows, D1.cols
    D = Matrix(n1, n3, np.minimum(D1.a, D2.a))
    C = [[0] * n3 for _ in range(n1)]
    for i in range(n1):
        for j in range(n3):
            d = D[i, j]
            if d == INF:
                continue
            tot = 0
            if D1[i, j] == d:
                tot += C1[i][j]
            if D2[i, j] == d:
                tot += C2[i][j]
            C[i][j] = tot
    return D, C


def apsp_count(W):
    """Exact shortest-path distances and counts for a positive-weight digraph.

    Hop-doubling over the funny product: (D^(=2m), C) from squaring, and
    D^(<2m) as the product of D^(<m) with D^(=m) merged with D^(<m) itself
    (walks shorter than m hops are not reproduced by the product).  Stops
    at the first 2^i > n.  Returns (distance Matrix, count rows).
    """
    n = W.rows
    if W.cols != n:
        raise ValueError("square matrix required")
    fin = W.a != INF
    if (W.a[fin] <= 0).any():
        raise ValueError("weights must be strictly positive")

    Deq = W.copy()
    Ceq = [[1 if fin[i, j] else 0 for j in range(n)] for i in range(n)]
    Dlt = Matrix(n, n, np.where(np.eye(n, dtype=bool), 0, INF))
    Clt = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    m = 1
    while m <= n:
        P, Pc = funny_product(Dlt, Clt, Deq, Ceq)
        Dlt, Clt = _merge_pair(Dlt, Clt, P, Pc)
        if 2 * m <= n:
            Deq, Ceq = funny_product(Deq, Ceq, Deq, Ceq)
        m *= 2
    return Dlt, Clt


# ---------------------------------------------------------------------------
# bounded-difference min-plus

def _ceil_div(v, d):
    return -((-v) // d)


def minplus_bounded_difference(A, B, c0, ell, s):
    """Min-plus product for matrices with the bounded-difference property.

    Adjacent row entries of A and adjacent column entries of B may differ
    by at most c0.  Coarse product over every ell-th inner index with
    entries rounded up to multiples of ell' = 2*c0*ell + 1, then Delta in
    {0,1,2} shells are triangle-decomposed and finished by small-entry
    min-plus products per (subgraph, offset r).
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    n1, n2, n3 = A.rows, A.cols, B.cols
    if (A.a == INF).any() or (B.a == INF).any():
        raise ValueError("bounded-difference min-plus requires finite entries")
    for i in range(n1):
        for k in range(n2 - 1):
            if abs(A[i, k + 1] - A[i, k]) > c0:
                raise ValueError("bounded-difference violation in A at (%d,%d)" % (i, k))
    for k in range(n2 - 1):
        for j in range(n3):
            if abs(B[k + 1, j] - B[k, j]) > c0:
                raise ValueError("bounded-difference violation in B at (%d,%d)" % (k, j))

    lp = 2 * c0 * ell + 1
    Didx = list(range(0, n2, ell))
    nd = len(Didx)
    At = Matrix(n1, nd, np.array([[_ceil_div(A[i, d], lp) for d in Didx]
                                  for i in range(n1)], dtype=np.int64))
    Bt = Matrix(nd, n3, np.array([[_ceil_div(B[d, j], lp) for j in range(n3)]
                                  for d in Didx], dtype=np.int64))
    Ct = minplus_naive(At, Bt)

    # small-entry residue matrices per offset r
    S = 3 * c0 * ell + 1
    Ar = []
    Br = []
    for r in range(ell):
        Am = Matrix(n1, nd)
        Bm = Matrix(nd, n3)
        for di, d in enumerate(Didx):
            k = d + r
            if k >= n2:
                continue
            Am.a[:, di] = A.a[:, k] - (At.a[:, di] * lp)
            Bm.a[di, :] = B.a[k, :] - (Bt.a[di, :] * lp)
        Ar.append(Am)
        Br.append(Bm)

    C = Matrix(n1, n3)
    smax = max(1, min(s, nd))
    for delta in (0, 1, 2):
        uv = Matrix(n1, n3, -(Ct.a + delta))
        G = TripartiteGraph(At, Bt, uv)
        D = triangle_decomposition(G, 0, smax)
        base = (Ct.a + delta) * lp
        for (i, d, j) in D.remainder:
            for r in range(ell):
                a, b = Ar[r][i, d], Br[r][d, j]
                if a != INF and b != INF:
                    cand = base[i, j] + a + b
                    if cand < C.a[i, j]:
                        C.a[i, j] = cand
        for cat in D.categories:
            for ux_mask, xv_mask in cat.subgraphs:
                for r in range(ell):
                    M1 = Matrix(n1, nd, np.where(ux_mask, Ar[r].a, INF))
                    M2 = Matrix(nd, n3, np.where(xv_mask, Br[r].a, INF))
                    if (M1.a == INF).all() or (M2.a == INF).all():
                        continue
                    sh1 = Matrix(n1, nd, np.where(M1.a != INF, M1.a + S, INF))
                    sh2 = Matrix(nd, n3, np.where(M2.a != INF, M2.a + S, INF))
                    prod = minplus_bounded(sh1, sh2, 2 * S)
                    sel = cat.uv_mask & (prod.a != INF)
                    cand = base + prod.a - 2 * S
                    C.a[sel] = np.minimum(C.a[sel], cand[sel])
    return C
