"""Kernel dispatch: compiled extension when built, pure Python otherwise.

The metric layer calls these four operations in its inner loop; both
backends produce identical results. PARAFILTER_KERNELS=python (or
=cython) forces a backend, the default "auto" prefers the compiled one.

The compiled kernels work on dense integer ids packed into 64-bit
n-gram keys; sequences whose packed keys would overflow (huge per-pair
vocabularies at high n, which real sentences never reach) transparently
fall back to the Python implementation.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_requested = os.environ.get("PARAFILTER_KERNELS", "auto").strip().lower() or "auto"
if _requested not in ("auto", "cython", "python"):
    raise ValueError(f"unrecognized PARAFILTER_KERNELS value: {_requested!r}")

_ck = None
if _requested in ("auto", "cython"):
    try:
        from . import _ckernels as _ck
    except ImportError:
        _ck = None
    if _requested == "cython" and _ck is None:
        raise ImportError(
            "PARAFILTER_KERNELS=cython but parafilter._ckernels is not built"
        )

#: Name of the active backend: "cython" or "python".
BACKEND = "cython" if _ck is not None else "python"

_PACK_LIMIT = 2 ** 63


def _encode(*seqs):
    """Map tokens to dense int64 ids shared across the given sequences."""
    ids: dict = {}
    arrays = []
    for seq in seqs:
        arr = np.empty(len(seq), dtype=np.int64)
        for i, tok in enumerate(seq):
            arr[i] = ids.setdefault(tok, len(ids))
        arrays.append(arr)
    return arrays, max(1, len(ids))


def lcs_length(a, b) -> int:
    """Longest-common-subsequence length between two token sequences."""
    if _ck is not None:
        (ea, eb), _ = _encode(a, b)
        return _ck.lcs_length(ea, eb)
    return _kernels_py.lcs_length(list(a), list(b))


def pinc_counts(src, cand, max_n: int):
    """(distinct candidate n-grams, source overlap) for n = 1..max_n."""
    if _ck is not None:
        (es, ec), base = _encode(src, cand)
        if base ** max_n < _PACK_LIMIT:
            return _ck.pinc_counts(es, ec, max_n, base)
    return _kernels_py.pinc_counts(list(src), list(cand), max_n)


def window_repeat(tokens, n: int) -> bool:
    """True iff some contiguous n-token window occurs at least twice.

    Always uses the Python implementation: at sentence lengths the
    integer-encoding overhead outweighs the compiled set probe (see
    benchmarks/bench_kernels.py).
    """
    return _kernels_py.window_repeat(list(tokens), n)


def clipped_counts(hyp, refs, max_n: int):
    """(clipped match count, hyp window count) for n = 1..max_n.

    Clipping takes the per-n-gram maximum count across references.
    """
    if _ck is not None:
        arrays, base = _encode(hyp, *refs)
        if base ** max_n < _PACK_LIMIT:
            return _ck.clipped_counts(arrays[0], arrays[1:], max_n, base)
    return _kernels_py.clipped_counts(
        list(hyp), [list(r) for r in refs], max_n
    )
