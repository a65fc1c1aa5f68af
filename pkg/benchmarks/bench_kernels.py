"""Compiled core vs pure-Python fallback on the enumeration and DP kernels.

    python benchmarks/bench_kernels.py            # default sizes
    python benchmarks/bench_kernels.py --quick    # smaller sizes, a few seconds
    python benchmarks/bench_kernels.py --json out.json

Both backends run on identical fixed-point weight matrices and their results
are compared, so a speedup is only reported for matching outputs.
"""

import argparse
import json
import random
import sys
import time

from noncross import kernels
from noncross.geometry import PointSet
from noncross.maxsolvers import _weights


def weights(n, seed, bits=128):
    rng = random.Random(seed)
    pts = set()
    while len(pts) < n:
        pts.add((rng.randrange(10**6), rng.randrange(10**6)))
    ps = PointSet.from_xy(sorted(pts))
    W, _ = _weights(ps.dist2_matrix(), bits)
    return W


def clock(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(quick):
    if quick:
        return [("brute", "path", 8), ("brute", "cycle", 8), ("brute", "matching", 10),
                ("dp", "path", 10), ("dp", "cycle", 10), ("dp", "matching", 12)]
    return [("brute", "path", 9), ("brute", "path", 10), ("brute", "cycle", 10),
            ("brute", "matching", 12), ("dp", "path", 12), ("dp", "cycle", 13),
            ("dp", "matching", 16)]


def run(quick=False, seed=0, repeat=1):
    if kernels.BACKEND != "compiled":
        print("compiled core not available; build it with `pip install -e . --no-build-isolation`",
              file=sys.stderr)
        return []
    rows = []
    for algo, kind, n in cases(quick):
        W = weights(n, seed + n)
        if algo == "brute":
            fns = {b: (lambda b=b: kernels.brute_max(W, kind, backend=b)) for b in ("compiled", "python")}
        else:
            K = 2 if kind == "matching" else 3
            fns = {b: (lambda b=b: kernels.dp_topk(W, kind, K, backend=b)[0]) for b in ("compiled", "python")}
        tc, rc = clock(fns["compiled"], repeat)
        tp, rp = clock(fns["python"], repeat)
        same = rc == rp
        rows.append({"kernel": algo, "kind": kind, "n": n, "compiled_s": round(tc, 4),
                     "python_s": round(tp, 4), "speedup": round(tp / tc, 1) if tc else None,
                     "outputs_match": same})
        print(f"{algo:5} {kind:8} n={n:<3} compiled {tc:8.3f}s  python {tp:8.3f}s  "
              f"x{tp / tc if tc else float('nan'):6.1f}  {'ok' if same else 'MISMATCH'}", flush=True)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--json", help="write rows to this file")
    args = ap.parse_args(argv)
    rows = run(args.quick, args.seed, args.repeat)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if rows and all(r["outputs_match"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
