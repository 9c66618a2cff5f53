"""fmtk: structured min-plus products, witness machinery, triangle
decompositions, additive-combinatorics covers, and reduction gadgets,
with brute-force oracle verification throughout.

Conventions shared by every module: integers are 64-bit with the INF
sentinel (2^63 - 1) for absent/undefined values; witness indices and
convolution semantics are 1-based with 0-based storage; ties break toward
the smallest index; randomized routines take an explicit splittable Rng.
"""

from .core import (
    INF,
    NOT_UNIQUE,
    BoolMatrix,
    IndexedSet,
    Matrix,
    OpCounter,
    Rng,
    TripartiteGraph,
    read_matrix,
    read_tripartite,
    write_matrix,
    write_tripartite,
)

__version__ = "0.1.0"

__all__ = [
    "INF", "NOT_UNIQUE", "BoolMatrix", "IndexedSet", "Matrix", "OpCounter",
    "Rng", "TripartiteGraph", "read_matrix", "read_tripartite",
    "write_matrix", "write_tripartite", "__version__",
]
