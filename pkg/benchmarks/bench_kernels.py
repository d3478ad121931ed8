"""Time the compiled kernels against the pure Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each kernel runs on the same seeded inputs under both backends. Outputs are
compared before timing (exactly, or to 1e-12 relative for floats), so a
speedup never hides a wrong answer.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from perronlab import kernels


def graph(n, density, seed):
    rng = np.random.default_rng(seed)
    return (rng.uniform(size=(n, n)) < density).astype(np.uint8)


def chain_needs(ncomp):
    # component c needs every component below it with the same parity
    need = np.zeros(ncomp, dtype=np.uint64)
    for c in range(ncomp):
        need[c] = sum(1 << k for k in range(c) if (c - k) % 2 == 0 and c - k <= 2)
    return need, np.arange(ncomp)


def cases():
    adj = graph(400, 0.01, 1)
    yield "strong_components n=400", lambda m: m.strong_components(adj)
    cyc = np.roll(np.eye(300, dtype=np.uint8), 1, axis=1) | graph(300, 0.002, 2)
    labels, _ = kernels._kernels_py.strong_components(cyc)
    comp = int(labels[0])
    yield "component_period n=300", lambda m: m.component_period(cyc, labels, comp)
    need, order = chain_needs(18)
    yield "closed_subsets 18 components", lambda m: m.closed_subsets(need, order)
    a = np.random.default_rng(3).uniform(size=(12, 12))
    a /= a.sum(axis=1, keepdims=True)
    coeffs = np.random.default_rng(4).uniform(size=(16, 200))
    yield "weighted_power_sums n=12 K=200", lambda m: m.weighted_power_sums(a, coeffs)


def same(x, y):
    if isinstance(x, tuple):
        return all(same(u, v) for u, v in zip(x, y))
    x, y = np.asarray(x), np.asarray(y)
    if x.dtype.kind == "f":
        # summation order differs between backends
        return np.allclose(x, y, rtol=1e-12, atol=0)
    return np.array_equal(x, y)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="Also write results to this file.")
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is timed", file=sys.stderr)
    rows = []
    for name, call in cases():
        outs = {b: call(m) for b, m in backends.items()}
        if "cython" in outs and not same(outs["python"], outs["cython"]):
            raise SystemExit(f"{name}: backends disagree")
        times = {}
        for b, m in backends.items():
            t = timeit.Timer(lambda: call(m))
            number, _ = t.autorange()
            times[b] = min(t.repeat(args.repeat, number)) / number
        row = {"kernel": name, **{f"{b}_s": v for b, v in times.items()}}
        if "cython" in times:
            row["speedup"] = times["python"] / times["cython"]
        rows.append(row)
    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'cython':>10}  {'speedup':>8}")
    for r in rows:
        cy = f"{r['cython_s'] * 1e3:8.3f}ms" if "cython_s" in r else f"{'-':>10}"
        sp = f"{r['speedup']:7.1f}x" if "speedup" in r else f"{'-':>8}"
        print(f"{r['kernel']:<{width}}  {r['python_s'] * 1e3:8.3f}ms  {cy}  {sp}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
