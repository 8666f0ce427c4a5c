"""Compare the compiled split-scan kernels against the numpy fallback.

Times the raw kernels on synthetic scans and full model training on the
bundled German credit data under both backends.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import importlib
import os
import statistics
import subprocess
import sys
import time

import numpy as np


def time_call(fn, repeats):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples)


def bench_kernels(repeats):
    from credittrees._kernels import _fallback

    try:
        _native = importlib.import_module("credittrees._kernels._native")
    except ImportError:
        print("compiled kernel unavailable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    n, k = 100_000, 2
    values = np.sort(rng.normal(size=n))
    cls = rng.integers(0, k, size=n).astype(np.int64)
    weights = np.ones(n)
    miss = rng.random(k)
    w = rng.random((n, k)) + 0.01
    zw = w * rng.normal(size=(n, k))
    extra = rng.random(k)

    cases = [
        ("rep_numeric_scan (n=%d)" % n,
         lambda m: m.rep_numeric_scan(values, cls, weights, miss)),
        ("lad_numeric_scan (n=%d)" % n,
         lambda m: m.lad_numeric_scan(values, zw, w, extra, extra)),
    ]
    print("%-28s %12s %12s %8s" % ("kernel", "python (ms)", "native (ms)", "speedup"))
    for name, call in cases:
        py_best, _ = time_call(lambda: call(_fallback), repeats)
        nat_best, _ = time_call(lambda: call(_native), repeats)
        print("%-28s %12.3f %12.3f %7.1fx"
              % (name, py_best * 1e3, nat_best * 1e3, py_best / nat_best))


TRAIN_SNIPPET = """\
import time
from credittrees import load_german_credit, train_ladtree, train_reptree
ds = load_german_credit()
for label, fn in (("reptree", train_reptree),
                  ("ladtree", lambda d: train_ladtree(d, 10))):
    samples = []
    for _ in range(%d):
        start = time.perf_counter()
        fn(ds)
        samples.append(time.perf_counter() - start)
    print("%%s %%.4f" %% (label, min(samples)))
"""


def bench_training(repeats):
    print()
    print("%-28s %12s %12s %8s" % ("training (German credit)", "python (s)",
                                   "native (s)", "speedup"))
    results = {}
    for backend in ("python", "native"):
        env = dict(os.environ, CREDITTREES_KERNEL=backend)
        out = subprocess.run(
            [sys.executable, "-c", TRAIN_SNIPPET % repeats],
            env=env, capture_output=True, text=True, check=True).stdout
        for line in out.strip().splitlines():
            label, sec = line.split()
            results[(backend, label)] = float(sec)
    for label in ("reptree", "ladtree"):
        py = results[("python", label)]
        nat = results[("native", label)]
        print("%-28s %12.3f %12.3f %7.1fx" % (label, py, nat, py / nat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    bench_kernels(args.repeats)
    bench_training(args.repeats)


if __name__ == "__main__":
    main()
