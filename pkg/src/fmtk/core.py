"""Core value types shared by every other module.

Integers are either finite signed 64-bit values or the saturating sentinel
INF (edge absent / value undefined).  INF + anything = INF, INF is larger
than every finite value, and a finite sum that would leave the 64-bit range
is a hard error rather than a silent wrap.  There is deliberately no -INF.

Matrices are stored as numpy int64 arrays with INF as a reserved bit
pattern (2^63 - 1); all arithmetic on them goes through the guarded helpers
below, never through raw numpy '+' on possibly-INF data.
"""

from __future__ import annotations

import json
import random

import numpy as np

INF = 2**63 - 1           # reserved sentinel; finite values must be < INF
_MIN_I64 = -(2**63)

NOT_UNIQUE = -1           # witness-recovery sentinel (witness indices are >= 1)


def is_fin(x):
    return x != INF


def ext_add(x, y):
    """Saturating addition of two extended ints (python ints in, int out)."""
    if x == INF or y == INF:
        return INF
    s = x + y
    if s >= INF or s < _MIN_I64:
        raise OverflowError("extended-int addition overflow: %d + %d" % (x, y))
    return s


def ext_sub(x, y):
    """x - y with INF - finite = INF.  finite - INF is an error (no -INF)."""
    if y == INF:
        if x == INF:
            return INF
        raise OverflowError("cannot subtract INF from a finite value")
    if x == INF:
        return INF
    s = x - y
    if s >= INF or s < _MIN_I64:
        raise OverflowError("extended-int subtraction overflow")
    return s


def ext_min(x, y):
    return x if x <= y else y


def check_finite_range(value, name="entry"):
    if value != INF and not (_MIN_I64 <= value < INF):
        raise OverflowError("%s out of 64-bit range: %r" % (name, value))


class Matrix:
    """Rectangular matrix of extended ints, row-major, immutable by convention."""

    __slots__ = ("rows", "cols", "a")

    def __init__(self, rows, cols, a=None):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        self.rows = rows
        self.cols = cols
        if a is None:
            self.a = np.full((rows, cols), INF, dtype=np.int64)
        else:
            a = np.asarray(a, dtype=np.int64)
            if a.shape != (rows, cols):
                raise ValueError("matrix data shape mismatch")
            self.a = a

    @classmethod
    def from_rows(cls, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0])
        for r in rows_data:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
            for v in r:
                check_finite_range(v)
        return cls(rows, cols, np.array(rows_data, dtype=np.int64))

    @classmethod
    def full(cls, rows, cols, value):
        check_finite_range(value)
        return cls(rows, cols, np.full((rows, cols), value, dtype=np.int64))

    def __getitem__(self, ij):
        return int(self.a[ij])

    def copy(self):
        return Matrix(self.rows, self.cols, self.a.copy())

    def tolist(self):
        return [[int(v) for v in row] for row in self.a]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and bool(np.array_equal(self.a, other.a)))

    def __hash__(self):
        return hash((self.rows, self.cols, self.a.tobytes()))

    def __repr__(self):
        return "Matrix(%d, %d, %r)" % (self.rows, self.cols, self.tolist())

    def finite_mask(self):
        return self.a != INF

    def max_abs_finite(self):
        m = self.finite_mask()
        if not m.any():
            return 0
        return int(np.abs(self.a[m]).max())


class BoolMatrix:
    """Boolean matrix packed into 64-bit words, row-major.

    bits[r, w] holds columns 64w .. 64w+63 of row r, LSB first; padding
    bits past `cols` are kept zero so popcounts are honest.
    """

    __slots__ = ("rows", "cols", "words", "bits")

    def __init__(self, rows, cols, bits=None):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        self.rows = rows
        self.cols = cols
        self.words = (cols + 63) // 64
        if bits is None:
            self.bits = np.zeros((rows, self.words), dtype=np.uint64)
        else:
            if bits.shape != (rows, self.words):
                raise ValueError("bit data shape mismatch")
            self.bits = bits

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=bool)
        rows, cols = dense.shape
        m = cls(rows, cols)
        idx = np.nonzero(dense)
        for r, c in zip(*idx):
            m.set(int(r), int(c))
        return m

    def set(self, r, c):
        self.bits[r, c // 64] |= np.uint64(1) << np.uint64(c % 64)

    def get(self, r, c):
        return bool((self.bits[r, c // 64] >> np.uint64(c % 64)) & np.uint64(1))

    def to_dense(self):
        out = np.zeros((self.rows, self.cols), dtype=bool)
        for c in range(self.cols):
            out[:, c] = (self.bits[:, c // 64] >> np.uint64(c % 64)) & np.uint64(1)
        return out

    def row_and_popcount(self, r, other_row_bits):
        """popcount(self row r AND other_row_bits)."""
        anded = self.bits[r] & other_row_bits
        return int(np.bitwise_count(anded).sum())


class Rng:
    """Deterministic splittable randomness.

    A stream is identified by (seed, stream-id string); the underlying
    generator is CPython's Mersenne Twister seeded from the byte string
    "seed|stream", which is stable across platforms.  Children get dotted
    stream ids and are independent of further draws from the parent.
    """

    __slots__ = ("seed", "stream", "_r", "_children")

    def __init__(self, seed, stream="root"):
        self.seed = int(seed) & (2**64 - 1)
        self.stream = str(stream)
        self._r = random.Random(("%d|%s" % (self.seed, self.stream)).encode())
        self._children = 0

    def split(self):
        child = Rng(self.seed, "%s.%d" % (self.stream, self._children))
        self._children += 1
        return child

    def randrange(self, n):
        return self._r.randrange(n)

    def randint(self, lo, hi):
        return self._r.randint(lo, hi)

    def random(self):
        return self._r.random()

    def sample(self, population, k):
        return self._r.sample(population, k)

    def shuffle(self, xs):
        self._r.shuffle(xs)

    def draw_u64(self):
        return self._r.getrandbits(64)


class IndexedSet:
    """A set {(i, a_i)} stored as a value array; INF marks absence.

    Positions are 1-based in the algebra (element (i, a_i) for i in [n]);
    storage is 0-based.  Differences/sums act coordinatewise on
    (index, value).
    """

    __slots__ = ("n", "vals")

    def __init__(self, n, vals=None):
        if n < 1:
            raise ValueError("indexed set length must be >= 1")
        self.n = n
        if vals is None:
            self.vals = [INF] * n
        else:
            if len(vals) != n:
                raise ValueError("value array length mismatch")
            for v in vals:
                check_finite_range(v)
            self.vals = list(vals)

    def members(self):
        """List of (1-based index, value) pairs present in the set."""
        return [(i + 1, v) for i, v in enumerate(self.vals) if v != INF]

    def get(self, i):
        """Value at 1-based index i, INF if absent or out of range."""
        if 1 <= i <= self.n:
            return self.vals[i - 1]
        return INF

    def size(self):
        return sum(1 for v in self.vals if v != INF)

    def __eq__(self, other):
        return (isinstance(other, IndexedSet) and self.n == other.n
                and self.vals == other.vals)

    def __repr__(self):
        return "IndexedSet(%d, %r)" % (self.n, self.vals)


class TripartiteGraph:
    """Weighted tripartite graph on parts U (n1), X (n2), V (n3).

    Edge weights live in three matrices; INF = edge absent.  Triangle
    (i, k, j) exists iff ux[i,k], xv[k,j], uv[i,j] are all finite, and its
    weight is their sum.
    """

    __slots__ = ("n1", "n2", "n3", "ux", "xv", "uv")

    def __init__(self, ux, xv, uv):
        if ux.cols != xv.rows or ux.rows != uv.rows or xv.cols != uv.cols:
            raise ValueError("inconsistent tripartite dimensions")
        self.n1, self.n2, self.n3 = ux.rows, ux.cols, xv.cols
        self.ux, self.xv, self.uv = ux, xv, uv

    def triangle_weight(self, i, k, j):
        """Weight of triangle (i,k,j), INF if any edge is absent."""
        a, b, c = self.ux[i, k], self.xv[k, j], self.uv[i, j]
        if a == INF or b == INF or c == INF:
            return INF
        return ext_add(ext_add(a, b), c)


# ---------------------------------------------------------------------------
# file formats

def _format_entry(v):
    return "inf" if v == INF else str(int(v))


def write_matrix(M, path):
    with open(path, "w") as f:
        f.write(matrix_to_text(M))


def matrix_to_text(M):
    lines = ["%d %d" % (M.rows, M.cols)]
    for row in M.tolist():
        lines.append(" ".join(_format_entry(v) for v in row))
    return "\n".join(lines) + "\n"


class ParseError(ValueError):
    pass


def _parse_entry(tok, line_no, col_no):
    if tok == "inf":
        return INF
    try:
        v = int(tok)
    except ValueError:
        raise ParseError("line %d, entry %d: malformed token %r"
                         % (line_no, col_no, tok))
    if not (_MIN_I64 <= v < INF):
        raise ParseError("line %d, entry %d: value out of 64-bit range"
                         % (line_no, col_no))
    return v


def matrix_from_text(text):
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError("line 1: expected 'rows cols' header")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("line 1: non-integer dimensions")
    if rows < 1 or cols < 1:
        raise ParseError("line 1: dimensions must be >= 1")
    toks = []
    for ln, line in enumerate(lines[1:], start=2):
        for cn, tok in enumerate(line.split(), start=1):
            toks.append(_parse_entry(tok, ln, cn))
    if len(toks) != rows * cols:
        raise ParseError("expected %d entries, found %d" % (rows * cols, len(toks)))
    data = np.array(toks, dtype=np.int64).reshape(rows, cols)
    return Matrix(rows, cols, data)


def read_matrix(path):
    with open(path) as f:
        return matrix_from_text(f.read())


def tripartite_to_json(G):
    def mat(M):
        return [["inf" if v == INF else v for v in row] for row in M.tolist()]
    return {"n1": G.n1, "n2": G.n2, "n3": G.n3,
            "ux": mat(G.ux), "xv": mat(G.xv), "uv": mat(G.uv)}


def tripartite_from_json(obj):
    def mat(rows_data):
        parsed = [[INF if v == "inf" else int(v) for v in row] for row in rows_data]
        return Matrix.from_rows(parsed)
    G = TripartiteGraph(mat(obj["ux"]), mat(obj["xv"]), mat(obj["uv"]))
    if (G.n1, G.n2, G.n3) != (obj["n1"], obj["n2"], obj["n3"]):
        raise ParseError("tripartite JSON dimension fields disagree with matrices")
    return G


def write_tripartite(G, path):
    with open(path, "w") as f:
        json.dump(tripartite_to_json(G), f)


def read_tripartite(path):
    with open(path) as f:
        return tripartite_from_json(json.load(f))


# ---------------------------------------------------------------------------
# primality

def _is_prime(n):
    """Deterministic Miller-Rabin, exact for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime_in(lo, hi, rng):
    """A prime in [lo, hi], chosen by a Miller-Rabin scan from a random offset."""
    if not (3 <= lo <= hi):
        raise ValueError("need hi >= lo >= 3")
    width = hi - lo + 1
    start = rng.randrange(width)
    for step in range(width):
        cand = lo + (start + step) % width
        if _is_prime(cand):
            return cand
    raise ValueError("no prime in [%d, %d]" % (lo, hi))


# ---------------------------------------------------------------------------
# operation counters (first-class in bench/verify reports)

class OpCounter:
    """Named operation counters threaded through the algorithm paths."""

    def __init__(self):
        self.counts = {}

    def add(self, name, k=1):
        self.counts[name] = self.counts.get(name, 0) + k

    def get(self, name):
        return self.counts.get(name, 0)

    def as_dict(self):
        return dict(sorted(self.counts.items()))
