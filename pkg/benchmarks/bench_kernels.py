#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the four kernel operations over synthetic sentence pairs sized
like real corpus data (6-20 tokens) and prints per-op throughput for
both backends. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--pairs 20000]
"""

import argparse
import random
import time

from parafilter import _kernels_py
from parafilter.kernels import _encode

try:
    from parafilter import _ckernels
except ImportError:
    _ckernels = None


def make_pairs(n, seed=12345):
    rng = random.Random(seed)
    vocab = [f"tok{i}" for i in range(2000)]
    pairs = []
    for _ in range(n):
        src = [rng.choice(vocab) for _ in range(rng.randint(6, 20))]
        cand = [rng.choice(vocab) for _ in range(rng.randint(6, 20))]
        pairs.append((src, cand))
    return pairs


def bench_python(pairs):
    out = {}
    start = time.perf_counter()
    for src, cand in pairs:
        _kernels_py.pinc_counts(src, cand, 4)
    out["pinc_counts"] = time.perf_counter() - start
    start = time.perf_counter()
    for src, cand in pairs:
        _kernels_py.lcs_length(src, cand)
    out["lcs_length"] = time.perf_counter() - start
    start = time.perf_counter()
    for _, cand in pairs:
        _kernels_py.window_repeat(cand, 2)
    out["window_repeat"] = time.perf_counter() - start
    start = time.perf_counter()
    for src, cand in pairs:
        _kernels_py.clipped_counts(cand, [src], 4)
    out["clipped_counts"] = time.perf_counter() - start
    return out


def bench_cython(pairs):
    out = {}
    start = time.perf_counter()
    for src, cand in pairs:
        (es, ec), base = _encode(src, cand)
        _ckernels.pinc_counts(es, ec, 4, base)
    out["pinc_counts"] = time.perf_counter() - start
    start = time.perf_counter()
    for src, cand in pairs:
        (es, ec), _ = _encode(src, cand)
        _ckernels.lcs_length(es, ec)
    out["lcs_length"] = time.perf_counter() - start
    start = time.perf_counter()
    for _, cand in pairs:
        (ec,), base = _encode(cand)
        _ckernels.window_repeat(ec, 2, base)
    out["window_repeat"] = time.perf_counter() - start
    start = time.perf_counter()
    for src, cand in pairs:
        (ec, es), base = _encode(cand, src)
        _ckernels.clipped_counts(ec, [es], 4, base)
    out["clipped_counts"] = time.perf_counter() - start
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--pairs", type=int, default=20000)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs)
    py = bench_python(pairs)
    cy = bench_cython(pairs) if _ckernels is not None else None

    print(f"{args.pairs} sentence pairs, tokens 6-20, vocab 2000")
    header = f"{'op':<16} {'python':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for op in ("pinc_counts", "lcs_length", "window_repeat", "clipped_counts"):
        py_s = py[op]
        if cy is None:
            print(f"{op:<16} {py_s:>9.3f}s {'n/a':>10} {'n/a':>8}")
        else:
            cy_s = cy[op]
            print(f"{op:<16} {py_s:>9.3f}s {cy_s:>9.3f}s {py_s / cy_s:>7.1f}x")
    if cy is None:
        print("\ncompiled kernels not built; showing fallback only")


if __name__ == "__main__":
    main()
