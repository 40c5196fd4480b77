"""Compare the compiled and pure-Python search kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends get identical inputs: sequence comparisons taken from
reduction traces of the example program, and exact measure computations
on small terms. Results must agree; timings are printed per workload.
"""

import argparse
import random
import sys
import time

from srgraph.kernels import _pykernels
from srgraph.order import MeasureContext, Precedence
from srgraph.pint import pint
from srgraph.rewriting import reduce
from srgraph.safe_recursion import example_program, unary
from srgraph.graph import basic_graph
from srgraph.terms import app, constructor, defined
from srgraph.verification import normalized_precedence

try:
    from srgraph.kernels import _ckernels
except ImportError:
    _ckernels = None


def sequence_workload(max_m=8):
    """(eq, st, ell) triples from consecutive interpretations."""
    from srgraph.order import gt_st
    cp = example_program()
    s = cp.signature
    prec = normalized_precedence(cp.precedence)
    y = app(s["c"], app(s["eps"]), app(s["eps"]))
    out = []
    for m in range(1, max_m + 1):
        g0 = basic_graph(cp.main, [unary(m, s["s"], s["0"]), y], [])
        red = reduce(g0, cp.provider, "any", seed=m)
        ell = 2 * 4 + cp.d
        seqs = [pint(g) for g in red.trace.graphs()]
        for a, b in zip(seqs, seqs[1:]):
            if not len(a):
                continue
            eq = [[tj is si for si in a.items] for tj in b.items]
            st = [[gt_st(si, tj, ell, prec) for si in a.items] for tj in b.items]
            out.append((eq, st, ell))
    return out


def adversarial_workload(n=200, seed=0):
    """Dense random relations where most assignments fail late."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        k = rng.randint(3, 9)
        m = rng.randint(2, 14)
        eq = [[rng.random() < 0.15 for _ in range(k)] for _ in range(m)]
        st = [[rng.random() < 0.35 for _ in range(k)] for _ in range(m)]
        out.append((eq, st, rng.randint(1, 3)))
    return out


def measure_workload():
    c0, c1, c2 = constructor("0"), constructor("s", 1), constructor("c", 2)
    f, g, h = defined("f", 2), defined("g", 1), defined("h", 0)
    prec = Precedence([("f", "g"), ("g", "h")]
                      + [(a, b) for a in "fgh" for b in ("0", "s", "c")])
    sig = [f, g, h, c0, c1, c2]
    zero = app(c0)
    one = app(c1, zero)
    terms = [app(f, app(c1, one), zero), app(f, app(c2, zero, zero), one),
             app(f, app(c2, one, zero), one), app(g, app(c2, one, zero))]
    work = [(t, ell, prec, sig) for t in terms for ell in (1, 2)]
    work.append((terms[-1], 3, prec, sig))
    return work


def run_ab(mod, work, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        res = [mod.ab_feasible(eq, st, ell) for eq, st, ell in work]
    return (time.perf_counter() - t0) / repeat, res


def run_measure(mod, work, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        res = []
        for t, ell, prec, sig in work:
            ctx = MeasureContext(ell, prec, sig)
            ids = (ctx._id(t),)
            ctx._expand(ids[0])
            res.append(mod.longest_descent(ids, ctx._succ, ell, ctx.budget, {}))
    return (time.perf_counter() - t0) / repeat, res


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run 'pip install -e . --no-build-isolation'")
        return 1
    workloads = [("sequence clause, traces", run_ab, sequence_workload()),
                 ("sequence clause, random", run_ab, adversarial_workload()),
                 ("measure, longest descent", run_measure, measure_workload())]
    print(f"{'workload':28s} {'cases':>6s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn, work in workloads:
        tp, rp = fn(_pykernels, work, a.repeat)
        tc, rc = fn(_ckernels, work, a.repeat)
        if rp != rc:
            print(f"{name}: backends disagree")
            return 1
        print(f"{name:28s} {len(work):6d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
