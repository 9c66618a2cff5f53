"""Structured matrix and convolution products.

Min-plus (naive / bounded-entry / frequency-split key reduction), the
Matousek-style dominance and equality products, generalized equality
products, min-witness and min-equality products, the convolution oracles,
and output-sensitive sumsets.

Index conventions: witness indices and the convolution semantics are
1-based, matching min{k in [n2] : ...}; storage is 0-based throughout.
Ties in every min-respecting product break toward the smallest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import INF, Matrix, Rng, check_finite_range, ext_add, random_prime_in

_SAFE_ADD = 2**61   # finite magnitudes below this can be added pairwise in int64


@dataclass(frozen=True)
class FreqSplitParams:
    r: int

    def validated(self, n2):
        if not (1 <= self.r):
            raise ValueError("frequency threshold r must be >= 1")
        return self


@dataclass(frozen=True)
class KeyReductionParams:
    s: int
    t: int
    r: int
    ell: int

    @property
    def g(self):
        return -(-self.ell // self.t)

    def validated(self, n2):
        if not (1 <= self.s <= n2):
            raise ValueError("need 1 <= s <= n2")
        if not (1 <= self.t <= self.ell):
            raise ValueError("need 1 <= t <= ell")
        if self.r < 1:
            raise ValueError("need r >= 1")
        return self


def _check_addable(*mats):
    for M in mats:
        if M.max_abs_finite() >= _SAFE_ADD:
            raise OverflowError("finite entries too large for vectorized addition")


# ---------------------------------------------------------------------------
# min-plus products

def minplus_naive(A, B, counter=None):
    """C[i,j] = min_k A[i,k] + B[k,j]; the oracle every other path must match."""
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    _check_addable(A, B)
    bfin = B.a != INF
    C = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        row = A.a[i]
        valid = (row != INF)[:, None] & bfin
        S = np.where(valid, row[:, None] + B.a, INF)
        C.a[i] = S.min(axis=0)
    if counter is not None:
        counter.add("minplus_cells", A.rows * A.cols * B.cols)
    return C


def minplus_naive_restricted(A, B, cols):
    """Min-plus restricted to the 0-based inner indices in `cols`."""
    if len(cols) == 0:
        return Matrix(A.rows, B.cols)
    sub_a = Matrix(A.rows, len(cols), np.ascontiguousarray(A.a[:, cols]))
    sub_b = Matrix(len(cols), B.cols, np.ascontiguousarray(B.a[cols, :]))
    return minplus_naive(sub_a, sub_b)


def minplus_bounded(A, B, M, counter=None):
    """Min-plus via the base-x digit encoding and one exact integer matmul.

    Finite entries must lie in [0, M].  Entry a becomes the digit x^(M-a)
    with x = n2+1 (so digit sums never carry); the highest nonzero digit of
    the integer product P[i,j] sits at exponent 2M - C[i,j].
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    if M < 0:
        raise ValueError("M must be >= 0")
    for Mat in (A, B):
        fin = Mat.a[Mat.a != INF]
        if fin.size and (fin.min() < 0 or fin.max() > M):
            raise ValueError("entry outside [0, M]")
    n2 = A.cols
    x = n2 + 1
    xp = [x**e for e in range(2 * M + 1)]
    EA = [[0 if A[i, k] == INF else xp[M - A[i, k]] for k in range(n2)]
          for i in range(A.rows)]
    EBcols = [[0 if B[k, j] == INF else xp[M - B[k, j]] for k in range(n2)]
              for j in range(B.cols)]
    C = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        rowa = EA[i]
        for j in range(B.cols):
            colb = EBcols[j]
            P = sum(a * b for a, b in zip(rowa, colb) if a and b)
            if counter is not None:
                counter.add("bigdigit_ops", n2)
            if P == 0:
                C.a[i, j] = INF
            else:
                e = 0
                while e < 2 * M and xp[e + 1] <= P:
                    e += 1
                # e is the highest exponent with x^e <= P, i.e. the top digit
                C.a[i, j] = 2 * M - e
    return C


# ---------------------------------------------------------------------------
# frequency-split products (dominance / equality / generalized equality)

def _column_buckets(A, B, k, r):
    """Sorted combined column entries split into r near-equal buckets.

    Returns (bucket id per A row i, bucket id per B col j).  Equal values
    sort A-side first, so bucket(A) < bucket(B) implies A <= B exactly.
    """
    n1, n3 = A.rows, B.cols
    items = [(A[i, k], 0, i) for i in range(n1)] + \
            [(B[k, j], 1, j) for j in range(n3)]
    items.sort()
    total = len(items)
    abuck = [0] * n1
    bbuck = [0] * n3
    for pos, (_, side, idx) in enumerate(items):
        b = pos * r // total
        if side == 0:
            abuck[idx] = b
        else:
            bbuck[idx] = b
    return abuck, bbuck


def dominance_product(A, B, p=FreqSplitParams(1), counter=None):
    """C[i,j] = #{k : A[i,k] <= B[k,j]} via bucket split + popcount matmul."""
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    if (A.a == INF).any() or (B.a == INF).any():
        raise ValueError("dominance product requires finite entries")
    r = max(1, min(p.validated(A.cols).r, A.rows + B.cols))
    n1, n2, n3 = A.rows, A.cols, B.cols
    C = np.zeros((n1, n3), dtype=np.int64)

    words = (n2 * r + 63) // 64
    Abits = np.zeros((n1, words), dtype=np.uint64)
    Bbits = np.zeros((n3, words), dtype=np.uint64)

    for k in range(n2):
        abuck, bbuck = _column_buckets(A, B, k, r)
        # same-bucket pairs: exact scan
        per_bucket_a = {}
        per_bucket_b = {}
        for i, b in enumerate(abuck):
            per_bucket_a.setdefault(b, []).append(i)
        for j, b in enumerate(bbuck):
            per_bucket_b.setdefault(b, []).append(j)
        for b, ilist in per_bucket_a.items():
            jlist = per_bucket_b.get(b)
            if not jlist:
                continue
            for i in ilist:
                aik = A[i, k]
                for j in jlist:
                    if aik <= B[k, j]:
                        C[i, j] += 1
                if counter is not None:
                    counter.add("pair_checks", len(jlist))
        # cross-bucket pairs: A in bucket b, B in any bucket > b
        for i, b in enumerate(abuck):
            pos = k * r + b
            Abits[i, pos // 64] |= np.uint64(1) << np.uint64(pos % 64)
        for j, b in enumerate(bbuck):
            for bb in range(b):      # B's bucket exceeds every bb < b
                pos = k * r + bb
                Bbits[j, pos // 64] |= np.uint64(1) << np.uint64(pos % 64)

    for i in range(n1):
        anded = Abits[i][None, :] & Bbits
        C[i] += np.bitwise_count(anded).sum(axis=1).astype(np.int64)
    if counter is not None:
        counter.add("matmul_word_ops", n1 * n3 * words)
    return [[int(v) for v in row] for row in C]


def equality_product(A, B, p=FreqSplitParams(1), counter=None):
    """C[i,j] = #{k : A[i,k] = B[k,j]}, low/high frequency split."""
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    if (A.a == INF).any() or (B.a == INF).any():
        raise ValueError("equality product requires finite entries")
    r = p.validated(A.cols).r
    n1, n2, n3 = A.rows, A.cols, B.cols
    C = np.zeros((n1, n3), dtype=np.int64)

    # per inner index k: F_k = values with frequency > n3/r in B's row k
    hi_slots = []          # (k, value) pairs, one expanded slot each
    for k in range(n2):
        occ = {}
        for j in range(n3):
            occ.setdefault(B[k, j], []).append(j)
        F = {v for v, js in occ.items() if len(js) * r > n3}
        for v in sorted(F):
            hi_slots.append((k, v))
        for i in range(n1):
            v = A[i, k]
            if v in F:
                continue
            for j in occ.get(v, ()):
                C[i, j] += 1
            if counter is not None:
                counter.add("pair_checks", len(occ.get(v, ())))

    if hi_slots:
        words = (len(hi_slots) + 63) // 64
        Abits = np.zeros((n1, words), dtype=np.uint64)
        Bbits = np.zeros((n3, words), dtype=np.uint64)
        for pos, (k, v) in enumerate(hi_slots):
            w, sh = pos // 64, np.uint64(pos % 64)
            for i in range(n1):
                if A[i, k] == v:
                    Abits[i, w] |= np.uint64(1) << sh
            for j in range(n3):
                if B[k, j] == v:
                    Bbits[j, w] |= np.uint64(1) << sh
        for i in range(n1):
            anded = Abits[i][None, :] & Bbits
            C[i] += np.bitwise_count(anded).sum(axis=1).astype(np.int64)
        if counter is not None:
            counter.add("matmul_word_ops", n1 * n3 * words)
    return [[int(v) for v in row] for row in C]


def generalized_equality_product(A, Ap, B, Bp, p, bound, counter=None):
    """E[i,j] = min over {k : A[i,k] = B[k,j], finite} of A'[i,k] + B'[k,j].

    A'/B' entries must lie in [-bound, bound] or be INF; INF keys never
    match anything (including other INFs).  High-frequency buckets go
    through a min-plus product over the expanded (k, value) index, run by
    minplus_bounded after a +bound shift.
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    r = p.validated(A.cols).r if isinstance(p, FreqSplitParams) else FreqSplitParams(p).validated(A.cols).r
    for M in (Ap, Bp):
        fin = M.a[M.a != INF]
        if fin.size and (fin.min() < -bound or fin.max() > bound):
            raise ValueError("value entry outside [-bound, bound]")
    n1, n2, n3 = A.rows, A.cols, B.cols
    E = Matrix(n1, n3)

    hi_slots = []
    lo_updates = []        # deferred (i, j, value) updates
    for k in range(n2):
        occ = {}
        for j in range(n3):
            v = B[k, j]
            if v != INF:
                occ.setdefault(v, []).append(j)
        F = {v for v, js in occ.items() if len(js) * r > n3}
        for v in sorted(F):
            hi_slots.append((k, v))
        for i in range(n1):
            v = A[i, k]
            if v == INF or v in F or Ap[i, k] == INF:
                continue
            for j in occ.get(v, ()):
                if Bp[k, j] != INF:
                    cand = Ap[i, k] + Bp[k, j]
                    if cand < E.a[i, j]:
                        E.a[i, j] = cand
            if counter is not None:
                counter.add("pair_checks", len(occ.get(v, ())))

    if hi_slots:
        m = len(hi_slots)
        Ahat = Matrix(n1, m)
        Bhat = Matrix(m, n3)
        for pos, (k, v) in enumerate(hi_slots):
            for i in range(n1):
                if A[i, k] == v and Ap[i, k] != INF:
                    Ahat.a[i, pos] = Ap[i, k] + bound
            for j in range(n3):
                if B[k, j] == v and Bp[k, j] != INF:
                    Bhat.a[pos, j] = Bp[k, j] + bound
        Ehi = minplus_bounded(Ahat, Bhat, 2 * bound, counter=counter)
        sel = Ehi.a != INF
        shifted = Ehi.a - 2 * bound
        E.a[sel] = np.minimum(E.a[sel], shifted[sel])
    return E


# ---------------------------------------------------------------------------
# min-witness / min-equality products (oracle-grade scans)

def min_witness_product(A, B):
    """C[i,j] = least 1-based k with A[i,k] and B[k,j] (BoolMatrix inputs)."""
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    Ad = A.to_dense()
    Bd = B.to_dense()
    C = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        for j in range(B.cols):
            hits = np.nonzero(Ad[i] & Bd[:, j])[0]
            C.a[i, j] = int(hits[0]) + 1 if hits.size else INF
    return C


def min_equality_product(A, B):
    """C[i,j] = min{A[i,k] : A[i,k] = B[k,j], finite}."""
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    C = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        row = A.a[i]
        eq = (row[:, None] == B.a) & (row != INF)[:, None]
        vals = np.where(eq, row[:, None], INF)
        C.a[i] = vals.min(axis=0)
    return C


# ---------------------------------------------------------------------------
# convolutions (1-based semantics, 0-based storage)

def _as_i64(a):
    arr = np.asarray(a, dtype=np.int64)
    fin = arr[arr != INF]
    if fin.size and np.abs(fin).max() >= _SAFE_ADD:
        raise OverflowError("array entries too large")
    return arr


def min_equal_convolution(a, b):
    """c_i = min{a_j : j in [i-1], a_j = b_{i-j}} (1-based); c_1 = INF."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    aa, bb = _as_i64(a), _as_i64(b)
    n = len(aa)
    c = np.full(n, INF, dtype=np.int64)
    for m in range(1, n):
        left = aa[:m]
        right = bb[m - 1::-1][:m]
        mask = (left != INF) & (left == right)
        if mask.any():
            c[m] = left[mask].min()
    return [int(v) for v in c]


def minplus_convolution_naive(a, b):
    """c_i = min over j in [i-1] of a_j + b_{i-j} (1-based); c_1 = INF."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    aa, bb = _as_i64(a), _as_i64(b)
    n = len(aa)
    c = np.full(n, INF, dtype=np.int64)
    for m in range(1, n):
        left = aa[:m]
        right = bb[m - 1::-1][:m]
        mask = (left != INF) & (right != INF)
        if mask.any():
            c[m] = (left[mask] + right[mask]).min()
    return [int(v) for v in c]


def threesum_convolution_counts(a, b, c):
    """|W_k| = #{i in [k-1] : a_i + b_{k-i} = c_k} per 1-based k."""
    if not (len(a) == len(b) == len(c)):
        raise ValueError("length mismatch")
    aa, bb, cc = _as_i64(a), _as_i64(b), _as_i64(c)
    n = len(aa)
    out = [0] * n
    for m in range(1, n):
        if cc[m] == INF:
            continue
        left = aa[:m]
        right = bb[m - 1::-1][:m]
        mask = (left != INF) & (right != INF)
        out[m] = int(((left + right == cc[m]) & mask).sum())
    return out


# ---------------------------------------------------------------------------
# output-sensitive sumset

_NTT_PRIMES = (
    (998244353, 3),
    (897581057, 3),
    (880803841, 26),
    (754974721, 11),
)
_FFT_VALUE_LIMIT = 2**20     # |values| above this take the direct path


def _ntt(a, p, root, invert):
    n = len(a)
    a = a.copy()
    # bit-reversal permutation
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        w_len = pow(root, (p - 1) // length, p)
        if invert:
            w_len = pow(w_len, p - 2, p)
        half = length // 2
        # powers of w_len: build by doubling so the python loop is O(log)
        w = np.ones(1, dtype=np.int64)
        while len(w) < half:
            scale = pow(int(w_len), len(w), p)
            w = np.concatenate([w, (w * scale) % p])
        w = w[:half]
        b = a.reshape(-1, length)
        u = b[:, :half].copy()
        v = (b[:, half:] * w) % p
        b[:, :half] = (u + v) % p
        b[:, half:] = (u - v) % p
        length *= 2
    if invert:
        n_inv = pow(n, p - 2, p)
        a = (a * n_inv) % p
    return a


def _convolve_mod(f, g, p, root):
    n = 1
    need = len(f) + len(g) - 1
    while n < need:
        n *= 2
    fa = np.zeros(n, dtype=np.int64)
    ga = np.zeros(n, dtype=np.int64)
    fa[:len(f)] = f
    ga[:len(g)] = g
    FA = _ntt(fa, p, root, False)
    GA = _ntt(ga, p, root, False)
    return _ntt((FA * GA) % p, p, root, True)[:need]


def _crt(residues):
    """Lift residues mod the NTT primes to the symmetric value mod their
    product (result in (-P/2, P/2], which covers every quantity we lift)."""
    x, mod = 0, 1
    for (p, _), r in zip(_NTT_PRIMES, residues):
        t = ((int(r) - x) * pow(mod, -1, p)) % p
        x += mod * t
        mod *= p
    if x > mod // 2:
        x -= mod
    return x


def sumset(A, B, rng=None, direct_threshold=4096, counter=None):
    """Exact {a+b : a in A, b in B}.

    Small products (or values beyond the FFT guard) use the direct product;
    otherwise values are hashed mod a random prime q, per-residue moment
    polynomials (count, sum, sum of squares) are multiplied by NTT over
    four word-size primes, and residues whose pair sums are provably all
    equal (zero variance, checked in exact CRT-lifted arithmetic) are
    accepted; the rest are resolved by direct bucket scans.
    """
    A = sorted(set(A))
    B = sorted(set(B))
    if not A or not B:
        return set()
    for v in (A[0], A[-1], B[0], B[-1]):
        check_finite_range(v)
    ext_add(A[-1], B[-1])
    ext_add(A[0], B[0])
    maxabs = max(abs(A[0]), abs(A[-1]), abs(B[0]), abs(B[-1]))
    if (len(A) * len(B) <= direct_threshold or maxabs > _FFT_VALUE_LIMIT
            or rng is None):
        if counter is not None:
            counter.add("pair_checks", len(A) * len(B))
        return {a + b for a in A for b in B}
    return _sumset_fft(A, B, rng, counter)


def _sumset_fft(A, B, rng, counter=None):
    L = 4 * (len(A) + len(B))
    q = random_prime_in(L, 2 * L, rng)
    ra = np.array([a % q for a in A], dtype=np.int64)
    rb = np.array([b % q for b in B], dtype=np.int64)

    out = set()
    conv = []
    for p, root in _NTT_PRIMES:
        fa = np.zeros((3, q), dtype=np.int64)
        gb = np.zeros((3, q), dtype=np.int64)
        for e, a in zip(ra, A):
            fa[0, e] += 1
            fa[1, e] = (fa[1, e] + a) % p
            fa[2, e] = (fa[2, e] + a * a) % p
        for e, b in zip(rb, B):
            gb[0, e] += 1
            gb[1, e] = (gb[1, e] + b) % p
            gb[2, e] = (gb[2, e] + b * b) % p
        cnt = _convolve_mod(fa[0], gb[0], p, root)
        s1 = (_convolve_mod(fa[1], gb[0], p, root)
              + _convolve_mod(fa[0], gb[1], p, root)) % p
        s2 = (_convolve_mod(fa[2], gb[0], p, root)
              + 2 * _convolve_mod(fa[1], gb[1], p, root)
              + _convolve_mod(fa[0], gb[2], p, root)) % p
        conv.append((cnt % p, s1, s2))
        if counter is not None:
            counter.add("ntt_points", len(cnt))

    bucketB = {}
    for e, b in zip(rb, B):
        bucketB.setdefault(int(e), []).append(b)

    npos = len(conv[0][0])
    for e in range(npos):
        if conv[0][0][e] == 0:
            continue
        C = _crt([conv[i][0][e] for i in range(len(_NTT_PRIMES))])
        S1 = _crt([conv[i][1][e] for i in range(len(_NTT_PRIMES))])
        S2 = _crt([conv[i][2][e] for i in range(len(_NTT_PRIMES))])
        if C == 0:
            continue
        # zero-variance test: all pair sums at this position are equal iff
        # C*S2 == S1^2 (exact integers; bounds are below the CRT modulus)
        if S1 % C == 0 and C * S2 == S1 * S1:
            out.add(S1 // C)
        else:
            # collided residue: resolve by scanning the B-buckets directly
            for a, e_a in zip(A, ra):
                need = e - int(e_a)
                for b in bucketB.get(need, ()):
                    out.add(a + b)
                if counter is not None:
                    counter.add("pair_checks", len(bucketB.get(need, ())))
    return out


# ---------------------------------------------------------------------------
# key reduction (few/many-witness split over the digit decomposition)

def _parity_split(M, g):
    """Split by (entry mod g) < g/2.  Returns [(matrix, shift)] with the
    high class shifted down by ceil(g/2) so the invariant holds again."""
    if g == 1:
        return [(M, 0)]
    delta = -(-g // 2)       # ceil(g/2)
    fin = M.a != INF
    lowmask = fin & (2 * (M.a % g) < g)
    highmask = fin & ~lowmask
    parts = []
    if lowmask.any():
        low = Matrix(M.rows, M.cols, np.where(lowmask, M.a, INF))
        parts.append((low, 0))
    if highmask.any():
        high = Matrix(M.rows, M.cols, np.where(highmask, M.a - delta, INF))
        parts.append((high, delta))
    if not parts:
        parts.append((M, 0))     # all-INF matrix
    return parts


def minplus_key_reduction(A, B, params, rng):
    """Min-plus product via the digit split + Fredman equality pipeline.

    Entries must be in [1..ell] or INF.  Equals minplus_naive(A, B).
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    params = params.validated(A.cols)
    for M in (A, B):
        fin = M.a[M.a != INF]
        if fin.size and (fin.min() < 1 or fin.max() > params.ell):
            raise ValueError("entry outside [1..ell] + INF")
    g = params.g
    C = Matrix(A.rows, B.cols)
    for Asub, da in _parity_split(A, g):
        for Bsub, db in _parity_split(B, g):
            part = _key_reduce_core(Asub, Bsub, params, g, rng.split())
            sel = part.a != INF
            cand = part.a + (da + db)
            C.a[sel] = np.minimum(C.a[sel], cand[sel])
    return C


def _key_reduce_core(A, B, params, g, rng):
    from .witnesses import list_witnesses_capped

    n1, n2, n3 = A.rows, A.cols, B.cols
    afin = A.a != INF
    bfin = B.a != INF
    Ap = Matrix(n1, n2, np.where(afin, A.a // g, INF))
    App = Matrix(n1, n2, np.where(afin, A.a % g, INF))
    Bp = Matrix(n2, n3, np.where(bfin, B.a // g, INF))
    Bpp = Matrix(n2, n3, np.where(bfin, B.a % g, INF))

    t_cap = int(max(0, np.max(np.where(afin, A.a // g, 0), initial=0),
                    np.max(np.where(bfin, B.a // g, 0), initial=0)))
    Cp = minplus_bounded(Ap, Bp, t_cap)

    cap = max(1, -(-n2 // params.s))
    rep = list_witnesses_capped(Ap, Bp, cap, rng.split())

    Cpp = Matrix(n1, n3)
    anchors = {}          # k0 (0-based) -> list of (i, j) it anchors
    Hsize = min(n2, max(1, math.ceil(4 * params.s * math.log(n1 * n2 * n3 + 2))))
    H = None
    pending = [(i, j) for i in range(n1) for j in range(n3)
               if rep.truncated[i][j]]
    for _ in range(10):
        H = sorted(rng.sample(range(n2), Hsize))
        anchors = {}
        ok = True
        for (i, j) in pending:
            k0 = next((k for k in H
                       if Ap[i, k] != INF and Bp[k, j] != INF
                       and Ap[i, k] + Bp[k, j] == Cp[i, j]), None)
            if k0 is None:
                ok = False
                break
            anchors.setdefault(k0, []).append((i, j))
        if ok:
            break
    else:
        # Las Vegas fallback: anchor each pair at its smallest witness
        anchors = {}
        for (i, j) in pending:
            k0 = next(k for k in range(n2)
                      if Ap[i, k] != INF and Bp[k, j] != INF
                      and Ap[i, k] + Bp[k, j] == Cp[i, j])
            anchors.setdefault(k0, []).append((i, j))

    for i in range(n1):
        for j in range(n3):
            if rep.truncated[i][j] or Cp[i, j] == INF:
                continue
            best = INF
            for k1 in rep.witnesses[i][j]:
                k = k1 - 1
                best = min(best, App[i, k] + Bpp[k, j])
            Cpp.a[i, j] = best

    bound = max(1, g, t_cap)
    for k0, pairs in anchors.items():
        Abar = Matrix(n1, n2)
        Bbar = Matrix(n2, n3)
        colk0 = Ap.a[:, k0]
        rowk0 = Bp.a[k0, :]
        selA = afin & (colk0 != INF)[:, None]
        Abar.a[selA] = (Ap.a - colk0[:, None])[selA]
        selB = bfin & (rowk0 != INF)[None, :]
        Bbar.a[selB] = (rowk0[None, :] - Bp.a)[selB]
        E = generalized_equality_product(Abar, App, Bbar, Bpp,
                                         FreqSplitParams(params.r), bound)
        for (i, j) in pairs:
            Cpp.a[i, j] = E[i, j]

    C = Matrix(n1, n3)
    sel = (Cp.a != INF) & (Cpp.a != INF)
    C.a[sel] = Cp.a[sel] * g + Cpp.a[sel]
    return C
