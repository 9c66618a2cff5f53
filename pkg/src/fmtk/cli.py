"""Command-line harness.

Subcommands: `verify` runs per-module property suites against the brute
oracles, `bench` runs a named algorithm with operation counters (the
primary evidence; wall-clock is informational) and can render the counters
to a figure, and `decompose` / `cover` / `gadget` / `count` dump library
structures as JSON for external inspection.

Exit codes: 0 all passed, 1 a case failed or an invariant broke, 2 usage.
The default seed comes from the FMTK_SEED environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import bsg, counting, gadgets, oracles, products, tridecomp, witnesses
from .core import (INF, BoolMatrix, IndexedSet, Matrix, OpCounter, Rng,
                   TripartiteGraph, matrix_from_text, read_matrix,
                   read_tripartite, tripartite_to_json)


# ---------------------------------------------------------------------------
# reporting

@dataclass
class RunReport:
    name: str
    seed: int
    cases: list = field(default_factory=list)      # {"name", "passed", "detail"}
    counters: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0
    payload: dict = field(default_factory=dict)

    def add_case(self, name, passed, detail=""):
        self.cases.append({"name": name, "passed": bool(passed),
                           "detail": str(detail)})

    @property
    def all_passed(self):
        return all(c["passed"] for c in self.cases)

    def to_json(self):
        doc = {
            "name": self.name,
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.all_passed,
            "counters": self.counters,
            "budgets": self.budgets,
            "wall_clock_s": round(self.wall_clock_s, 6),
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        }
        doc.update(self.payload)
        return json.dumps(doc, sort_keys=True, default=str)


# ---------------------------------------------------------------------------
# random instance helpers

def rand_matrix(rng, rows, cols, lo, hi, pinf=0.0):
    M = Matrix(rows, cols)
    for i in range(rows):
        for j in range(cols):
            M.a[i, j] = INF if rng.random() < pinf else rng.randint(lo, hi)
    return M


def rand_tripartite(rng, n1, n2, n3, lo, hi, pinf=0.2):
    return TripartiteGraph(rand_matrix(rng, n1, n2, lo, hi, pinf),
                           rand_matrix(rng, n2, n3, lo, hi, pinf),
                           rand_matrix(rng, n1, n3, lo, hi, pinf))


def rand_array(rng, n, lo, hi, pinf=0.0):
    return [INF if rng.random() < pinf else rng.randint(lo, hi)
            for _ in range(n)]


def rand_indexed_set(rng, n, lo, hi, pabsent=0.2):
    return IndexedSet(n, [INF if rng.random() < pabsent else rng.randint(lo, hi)
                          for _ in range(n)])


# ---------------------------------------------------------------------------
# verify suites

def _suite_products(rng, scale):
    trials = 6 if scale == "small" else 20
    out = []
    for t in range(trials):
        n = rng.randint(1, 6)
        A = rand_matrix(rng, n, n, 0, 12, 0.2)
        B = rand_matrix(rng, n, n, 0, 12, 0.2)
        ok = (products.minplus_naive(A, B).a ==
              oracles.brute_minplus(A, B).a).all()
        out.append(("minplus_vs_oracle_%d" % t, ok, ""))
        Af = rand_matrix(rng, n, n, 0, 9)
        Bf = rand_matrix(rng, n, n, 0, 9)
        okd = products.dominance_product(
            Af, Bf, products.FreqSplitParams(rng.randint(1, 4))) == \
            oracles.brute_dominance(Af, Bf)
        oke = products.equality_product(
            Af, Bf, products.FreqSplitParams(rng.randint(1, 4))) == \
            oracles.brute_equality(Af, Bf)
        out.append(("dominance_vs_oracle_%d" % t, okd, ""))
        out.append(("equality_vs_oracle_%d" % t, oke, ""))
        m = rng.randint(1, 10)
        a = rand_array(rng, m, -8, 8, 0.2)
        b = rand_array(rng, m, -8, 8, 0.2)
        ok1 = products.minplus_convolution_naive(a, b) == \
            oracles.brute_minplus_conv(a, b)
        ok2 = products.min_equal_convolution(a, b) == \
            oracles.brute_min_equal_conv(a, b)
        out.append(("minplus_conv_vs_oracle_%d" % t, ok1, ""))
        out.append(("minequal_conv_vs_oracle_%d" % t, ok2, ""))
        S1 = {rng.randint(-30, 30) for _ in range(rng.randint(1, 12))}
        S2 = {rng.randint(-30, 30) for _ in range(rng.randint(1, 12))}
        ok3 = products.sumset(S1, S2, rng.split()) == \
            oracles.brute_sumset(S1, S2)
        out.append(("sumset_vs_oracle_%d" % t, ok3, ""))
        ell = 12
        Ak = rand_matrix(rng, n, n, 1, ell, 0.2)
        Bk = rand_matrix(rng, n, n, 1, ell, 0.2)
        pk = products.KeyReductionParams(
            s=rng.randint(1, n), t=rng.randint(1, 4), r=2, ell=ell)
        ok4 = (products.minplus_key_reduction(Ak, Bk, pk, rng.split()).a ==
               products.minplus_naive(Ak, Bk).a).all()
        out.append(("key_reduction_vs_naive_%d" % t, ok4, ""))
    return out


def _suite_witnesses(rng, scale):
    trials = 6 if scale == "small" else 20
    out = []
    for t in range(trials):
        n = rng.randint(1, 6)
        A = rand_matrix(rng, n, n, 0, 6, 0.2)
        B = rand_matrix(rng, n, n, 0, 6, 0.2)
        sets, _ = oracles.brute_minplus_witness_sets(A, B)
        W = witnesses.unique_witness_matrix(A, B)
        ok = True
        for i in range(n):
            for j in range(n):
                w = int(W[i, j])
                ws = sets[i][j]
                if len(ws) == 1 and w != ws[0]:
                    ok = False
                if w != -1 and w not in ws:
                    ok = False
        out.append(("unique_witness_%d" % t, ok, ""))
        cap = rng.randint(1, n)
        rep = witnesses.list_witnesses_capped(A, B, cap, rng.split())
        ok2 = True
        for i in range(n):
            for j in range(n):
                ws = sets[i][j]
                got = rep.witnesses[i][j]
                if len(ws) <= cap:
                    ok2 = ok2 and got == ws and not rep.truncated[i][j]
                else:
                    ok2 = ok2 and len(got) == cap and rep.truncated[i][j] \
                        and set(got) <= set(ws)
        out.append(("capped_listing_%d" % t, ok2, ""))
        fam = [{rng.randint(1, 12) for _ in range(rng.randint(1, 5))}
               for _ in range(rng.randint(1, 6))]
        H = witnesses.greedy_hitting_set(fam)
        out.append(("hitting_set_%d" % t,
                    all(set(H) & s for s in fam), ""))
    return out


def _suite_counting(rng, scale):
    trials = 4 if scale == "small" else 12
    out = []
    for t in range(trials):
        n = rng.randint(1, 5)
        A = rand_matrix(rng, n, n, 0, 5, 0.2)
        B = rand_matrix(rng, n, n, 0, 5, 0.2)
        ok = counting.count_minplus(A, B, rng.split()) == \
            oracles.brute_minplus_witness_counts(A, B)
        out.append(("count_minplus_%d" % t, ok, ""))
        G = rand_tripartite(rng, n, n, n, -4, 4)
        tgt = rng.randint(-3, 3)
        ok2 = counting.count_ae_exact_tri(G, tgt) == \
            oracles.brute_exact_tri_counts(G, tgt)
        out.append(("count_exact_tri_%d" % t, ok2, ""))
        m = rng.randint(2, 10)
        a = rand_array(rng, m, 0, 8, 0.1)
        b = rand_array(rng, m, 0, 8, 0.1)
        ok3 = counting.minplus_conv_from_counting(
            a, b, lambda x, y: counting.count_minplus_conv(
                x, y, rng=rng.split())) == \
            products.minplus_convolution_naive(a, b)
        out.append(("minplus_conv_from_counting_%d" % t, ok3, ""))
        SA = {rng.randint(-10, 10) for _ in range(rng.randint(1, 8))}
        SB = {rng.randint(-10, 10) for _ in range(rng.randint(1, 8))}
        SC = {rng.randint(-20, 20) for _ in range(rng.randint(1, 8))}
        ok4 = counting.count_all_nums_3sum(SA, SB, SC, rng.split()) == \
            oracles.brute_3sum_counts(SA, SB, SC)
        out.append(("count_3sum_%d" % t, ok4, ""))
        W = rand_matrix(rng, n, n, 1, 4, 0.3)
        D, C = tridecomp.apsp_count(W)
        Db, Cb = oracles.brute_apsp_count(W)
        ok5 = [[int(v) for v in row] for row in D.a] == Db and C == Cb
        out.append(("apsp_count_%d" % t, ok5, ""))
    return out


def _suite_tridecomp(rng, scale):
    trials = 4 if scale == "small" else 12
    out = []
    for t in range(trials):
        n1, n2, n3 = (rng.randint(1, 5) for _ in range(3))
        G = rand_tripartite(rng, n1, n2, n3, -4, 4)
        tgt = rng.randint(-3, 3)
        s = rng.randint(1, max(1, min(4, n2)))
        D = tridecomp.triangle_decomposition(G, tgt, s)
        tris = tridecomp.decomposition_triangles(D)
        ok = sorted(tris) == sorted(oracles.brute_zero_triangle_list(G, tgt)) \
            and len(tris) == len(set(tris))
        out.append(("decomposition_%d" % t, ok, ""))
        G2 = TripartiteGraph(G.ux, G.xv,
                             rand_matrix(rng, n1, n3, -4, 4, 0.2))
        D2 = tridecomp.decomposition_update_uv(D, G2)
        D2f = tridecomp.triangle_decomposition(G2, tgt, s)
        ok2 = D2.to_json() == D2f.to_json()
        out.append(("update_equals_rebuild_%d" % t, ok2, ""))
    return out


def _suite_bsg(rng, scale):
    trials = 4 if scale == "small" else 10
    out = []
    for t in range(trials):
        n = rng.randint(4, 16)
        A = rand_indexed_set(rng, n, -6, 6)
        C = rand_indexed_set(rng, n, -6, 6, 0.5)
        s = rng.randint(1, 3)
        cov = bsg.bsg_cover_simple(A, C, s, rng.split())
        qual = oracles.brute_qualifying_pairs(A, C)
        out.append(("simple_cover_%d" % t,
                    oracles.brute_cover_check(cov, qual), ""))
        covp = bsg.bsg_cover_popular_fast(A, s, rng.randint(1, 3), rng.split())
        pop = oracles.brute_popular_pairs(A, s)
        okp = oracles.brute_cover_check(covp, pop) and \
            covp.ops <= covp.budgets["ops"]
        out.append(("popular_fast_cover_%d" % t, okp, ""))
    return out


def _suite_gadgets(rng, scale):
    trials = 4 if scale == "small" else 12
    out = []
    for t in range(trials):
        n, x, y = rng.randint(1, 4), rng.randint(1, 2), rng.randint(1, 2)
        A = rand_matrix(rng, n, x, 1, y)
        B = rand_matrix(rng, x, n, 1, y)
        want = products.minplus_naive(A, B)
        g1 = gadgets.minwitness_gadget(A, B, y)
        ok1 = (g1.decode(products.min_witness_product(g1.A, g1.B)).a
               == want.a).all()
        out.append(("minwitness_gadget_%d" % t, ok1, ""))
        if x * y * y <= n:
            g2 = gadgets.apslp_gadget(A, B, y)
            dist = oracles.brute_lex_shortest_path(
                g2.n_nodes, g2.edges, g2.sources, g2.targets)
            ok2 = (g2.decode(dist).a == want.a).all()
            out.append(("apslp_gadget_%d" % t, ok2, ""))
        g3 = gadgets.range_mode_gadget(A, B, y)
        ok3 = (g3.decode(oracles.brute_range_mode(g3.S, g3.queries)).a
               == want.a).all()
        out.append(("range_mode_gadget_%d" % t, ok3, ""))
        Av = rand_matrix(rng, n, n, 1, 2 * n)
        Bv = rand_matrix(rng, n, n, 1, 2 * n)
        g4 = gadgets.minequalprod_to_conv(Av, Bv)
        ok4 = (g4.decode(products.min_equal_convolution(g4.a, g4.b)).a ==
               products.min_equality_product(Av, Bv).a).all()
        out.append(("minequal_conv_gadget_%d" % t, ok4, ""))
    m = 16 if scale == "small" else 32
    a = rand_array(rng, m, 0, m)
    b = rand_array(rng, m, 0, m)
    res = gadgets.minplus_conv_via_minequal(
        a, b, products.min_equal_convolution, (1, 2, 2), rng.split())
    out.append(("minplus_conv_via_minequal",
                res == products.minplus_convolution_naive(a, b), ""))
    return out


_SUITES = {
    "products": _suite_products,
    "witnesses": _suite_witnesses,
    "counting": _suite_counting,
    "tridecomp": _suite_tridecomp,
    "bsg": _suite_bsg,
    "gadgets": _suite_gadgets,
}


def cmd_verify(args):
    names = sorted(_SUITES) if args.suite == "all" else [args.suite]
    report = RunReport(name="verify:" + args.suite, seed=args.seed)
    t0 = time.time()
    for name in names:
        rng = Rng(args.seed, "verify." + name)
        try:
            for case, ok, detail in _SUITES[name](rng, args.scale):
                report.add_case(name + "." + case, ok, detail)
        except Exception as exc:                    # honest failure report
            report.add_case(name + ".exception", False, repr(exc))
    report.wall_clock_s = time.time() - t0
    print(report.to_json())
    return 0 if report.all_passed else 1


# ---------------------------------------------------------------------------
# bench

def _naive_dominance_scan(A, B):
    """Straightforward per-row scan baseline (no frequency splitting)."""
    C = np.zeros((A.rows, B.cols), dtype=np.int64)
    for i in range(A.rows):
        C[i] = (A.a[i][:, None] <= B.a).sum(axis=0)
    return C


def _bench_dominance(n, params, rng, counter):
    r = int(params.get("r", max(1, round(n ** 0.5))))
    A = rand_matrix(rng, n, n, 0, n)
    B = rand_matrix(rng, n, n, 0, n)
    t0 = time.time()
    C = products.dominance_product(A, B, products.FreqSplitParams(r), counter)
    fast = time.time() - t0
    t0 = time.time()
    Cn = _naive_dominance_scan(A, B)
    naive = time.time() - t0
    return {"r": r, "fast_s": round(fast, 4), "naive_scan_s": round(naive, 4),
            "speedup": round(naive / fast, 3) if fast > 0 else None,
            "match": bool(np.array_equal(np.asarray(C), Cn))}


def _bench_equality(n, params, rng, counter):
    r = int(params.get("r", max(1, round(n ** 0.5))))
    A = rand_matrix(rng, n, n, 0, n)
    B = rand_matrix(rng, n, n, 0, n)
    products.equality_product(A, B, products.FreqSplitParams(r), counter)
    return {"r": r}


def _bench_tridecomp(n, params, rng, counter):
    s = int(params.get("s", 2))
    G = rand_tripartite(rng, n, n, n, -n, n)
    D = tridecomp.triangle_decomposition(G, int(params.get("target", 0)), s)
    return {"s": s, "remainder": len(D.remainder),
            "subgraphs": D.subgraph_count(),
            "categories": len(D.categories)}


def _bench_cover(mode):
    def run(n, params, rng, counter):
        s = int(params.get("s", 2))
        sh = int(params.get("sh", 2))
        A = rand_indexed_set(rng, n, -n, n)
        if mode == "popular_fast":
            cov = bsg.bsg_cover_popular_fast(A, s, sh, rng.split())
        else:
            C = rand_indexed_set(rng, n, -n, n, 0.5)
            fn = bsg.bsg_cover_simple if mode == "simple" \
                else bsg.bsg_cover_gowers
            cov = fn(A, C, s, rng.split())
        doc = {"s": s, "attempts": cov.attempts, "trivial": cov.trivial,
               "remainder": len(cov.remainder), "subsets": len(cov.subsets),
               "budgets": cov.budgets}
        if mode == "popular_fast":
            doc["sh"] = sh
            doc["ops"] = cov.ops
        return doc
    return run


def _bench_sumset(n, params, rng, counter):
    lo = -int(params.get("range", 4 * n))
    A = {rng.randint(lo, -lo) for _ in range(n)}
    B = {rng.randint(lo, -lo) for _ in range(n)}
    S = products.sumset(A, B, rng.split(), counter=counter)
    return {"out_size": len(S)}


def _bench_apsp_count(n, params, rng, counter):
    W = rand_matrix(rng, n, n, 1, n, 0.3)
    tridecomp.apsp_count(W)
    return {}


_BENCH = {
    "dominance_product": _bench_dominance,
    "equality_product": _bench_equality,
    "triangle_decomposition": _bench_tridecomp,
    "bsg_cover_simple": _bench_cover("simple"),
    "bsg_cover_gowers": _bench_cover("gowers"),
    "bsg_cover_popular_fast": _bench_cover("popular_fast"),
    "sumset": _bench_sumset,
    "apsp_count": _bench_apsp_count,
}


def _render_plot(report, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    names = sorted(report.counters)
    vals = [report.counters[k] for k in names]
    if names:
        ax1.bar(range(len(names)), vals, color="steelblue")
        ax1.set_xticks(range(len(names)))
        ax1.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
        ax1.set_yscale("log")
    ax1.set_title("operation counters")
    ax2.bar([0], [report.wall_clock_s], color="darkorange")
    ax2.set_xticks([0])
    ax2.set_xticklabels(["wall clock (s)"])
    ax2.set_title(report.name)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_bench(args):
    if args.algo not in _BENCH:
        print("unknown algorithm: %s (choose from %s)" %
              (args.algo, ", ".join(sorted(_BENCH))), file=sys.stderr)
        return 2
    params = {}
    for kv in args.params or []:
        if "=" not in kv:
            print("bad --params entry (want k=v): %r" % kv, file=sys.stderr)
            return 2
        k, v = kv.split("=", 1)
        params[k] = v
    rng = Rng(args.seed, "bench." + args.algo)
    counter = OpCounter()
    report = RunReport(name="bench:" + args.algo, seed=args.seed)
    t0 = time.time()
    try:
        payload = _BENCH[args.algo](args.n, params, rng, counter)
    except Exception as exc:
        report.add_case("run", False, repr(exc))
        report.wall_clock_s = time.time() - t0
        print(report.to_json())
        return 1
    report.wall_clock_s = time.time() - t0
    report.counters = counter.as_dict()
    report.payload = {"n": args.n, "algo": args.algo, "result": payload}
    report.add_case("run", True)
    text = report.to_json()
    print(text)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    if args.plot:
        _render_plot(report, args.plot)
    return 0


# ---------------------------------------------------------------------------
# structure dumps

def cmd_decompose(args):
    G = read_tripartite(args.graph)
    D = tridecomp.triangle_decomposition(G, args.target, args.s)
    doc = D.to_json()
    doc["s"] = args.s
    doc["target"] = args.target
    if args.verify:
        tris = tridecomp.decomposition_triangles(D)
        brute = oracles.brute_zero_triangle_list(G, args.target)
        doc["verified"] = sorted(tris) == sorted(brute)
        if not doc["verified"]:
            print(json.dumps(doc, sort_keys=True))
            return 1
    print(json.dumps(doc, sort_keys=True))
    return 0


def _read_indexed_set(path):
    with open(path) as fh:
        obj = json.load(fh)
    vals = [INF if v in ("inf", None) else int(v) for v in obj["vals"]]
    return IndexedSet(int(obj["n"]), vals)


def cmd_cover(args):
    A = _read_indexed_set(args.set)
    rng = Rng(args.seed, "cover")
    if args.mode == "popular_fast":
        cov = bsg.bsg_cover_popular_fast(A, args.s, args.sh, rng)
        qual = oracles.brute_popular_pairs(A, args.s)
    else:
        if not args.diffs:
            print("--diffs is required for mode " + args.mode, file=sys.stderr)
            return 2
        C = _read_indexed_set(args.diffs)
        fn = bsg.bsg_cover_simple if args.mode == "simple" \
            else bsg.bsg_cover_gowers
        cov = fn(A, C, args.s, rng)
        qual = oracles.brute_qualifying_pairs(A, C)
    doc = cov.to_json()
    if args.verify:
        doc["verified"] = oracles.brute_cover_check(cov, qual)
        if not doc["verified"]:
            print(json.dumps(doc, sort_keys=True))
            return 1
    print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_gadget(args):
    A = read_matrix(args.a)
    B = read_matrix(args.b)
    if args.kind == "minwitness":
        gad = gadgets.minwitness_gadget(A, B, args.y)
        solved = gad.decode(products.min_witness_product(gad.A, gad.B))
        want = products.minplus_naive(A, B)
    elif args.kind == "apslp":
        gad = gadgets.apslp_gadget(A, B, args.y)
        dist = oracles.brute_lex_shortest_path(
            gad.n_nodes, gad.edges, gad.sources, gad.targets)
        solved = gad.decode(dist)
        want = products.minplus_naive(A, B)
    elif args.kind == "rangemode":
        gad = gadgets.range_mode_gadget(A, B, args.y)
        solved = gad.decode(oracles.brute_range_mode(gad.S, gad.queries))
        want = products.minplus_naive(A, B)
    elif args.kind == "minequal":
        gad = gadgets.minwitness_to_minequal(A, B)
        solved = gad.decode(products.min_equality_product(gad.A, gad.B))
        want = None
    else:                                            # conv
        gad = gadgets.minequalprod_to_conv(A, B)
        solved = gad.decode(products.min_equal_convolution(gad.a, gad.b))
        want = products.min_equality_product(A, B)
    doc = gad.to_json()
    doc["decoded"] = [[None if v == INF else int(v) for v in row]
                      for row in solved.a]
    if args.verify and want is not None:
        doc["verified"] = bool((solved.a == want.a).all())
        if not doc["verified"]:
            print(json.dumps(doc, sort_keys=True))
            return 1
    print(json.dumps(doc, sort_keys=True))
    return 0


def _read_array(path):
    M = read_matrix(path)
    if M.rows != 1:
        raise ValueError("array files must have exactly one row")
    return [int(v) for v in M.a[0]]


def cmd_count(args):
    rng = Rng(args.seed, "count")
    if args.what == "minplus":
        A = read_matrix(args.a)
        B = read_matrix(args.b)
        doc = {"counts": counting.count_minplus(A, B, rng)}
    elif args.what == "minplus_conv":
        a = _read_array(args.a)
        b = _read_array(args.b)
        doc = {"counts": counting.count_minplus_conv(a, b, rng=rng)}
    elif args.what == "threesum":
        with open(args.a) as fh:
            obj = json.load(fh)
        doc = {"counts": counting.count_all_nums_3sum(
            obj["A"], obj["B"], obj["C"], rng)}
    else:                                            # exact_tri
        G = read_tripartite(args.graph)
        doc = {"counts": counting.count_ae_exact_tri(G, args.target)}
    print(json.dumps(doc, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# entry point

def _build_parser():
    seed_default = int(os.environ.get("FMTK_SEED", "0"))
    p = argparse.ArgumentParser(prog="fmtk", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a module property suite")
    v.add_argument("--suite", default="all",
                   choices=sorted(_SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=seed_default)
    v.add_argument("--scale", default="small", choices=["small", "medium"])
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run one algorithm with counters")
    b.add_argument("--algo", required=True)
    b.add_argument("--n", type=int, default=64)
    b.add_argument("--params", nargs="*", metavar="k=v")
    b.add_argument("--seed", type=int, default=seed_default)
    b.add_argument("--json", help="also write the report to this file")
    b.add_argument("--plot", help="render counters/wall-clock to this file")
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("decompose", help="triangle-decompose a graph file")
    d.add_argument("--graph", required=True)
    d.add_argument("--target", type=int, default=0)
    d.add_argument("--s", type=int, default=2)
    d.add_argument("--verify", action="store_true")
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("cover", help="build a pair cover for a set file")
    c.add_argument("--set", required=True)
    c.add_argument("--mode", default="simple",
                   choices=["simple", "gowers", "popular_fast"])
    c.add_argument("--diffs", help="difference set file (simple/gowers)")
    c.add_argument("--s", type=int, default=2)
    c.add_argument("--sh", type=int, default=2)
    c.add_argument("--seed", type=int, default=seed_default)
    c.add_argument("--verify", action="store_true")
    c.set_defaults(func=cmd_cover)

    g = sub.add_parser("gadget", help="emit a reduction gadget as JSON")
    g.add_argument("--kind", required=True,
                   choices=["minwitness", "apslp", "rangemode",
                            "minequal", "conv"])
    g.add_argument("--a", required=True)
    g.add_argument("--b", required=True)
    g.add_argument("--y", type=int, default=2)
    g.add_argument("--verify", action="store_true")
    g.set_defaults(func=cmd_gadget)

    n = sub.add_parser("count", help="exact witness counts for an instance")
    n.add_argument("--what", required=True,
                   choices=["minplus", "minplus_conv", "threesum",
                            "exact_tri"])
    n.add_argument("--a")
    n.add_argument("--b")
    n.add_argument("--graph")
    n.add_argument("--target", type=int, default=0)
    n.add_argument("--seed", type=int, default=seed_default)
    n.set_defaults(func=cmd_count)

    return p


def main(argv=None):
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
