"""Pure-Python token-sequence kernels.

Same results as the compiled module (parafilter._ckernels) but operating
on token sequences directly. Selected by parafilter.kernels when the
extension is absent or PARAFILTER_KERNELS=python.
"""

from collections import Counter


def lcs_length(a, b):
    """Length of the longest common subsequence, O(len(a)*len(b))."""
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, 1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                pj, cj = prev[j], cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev = cur
    return prev[-1]


def pinc_counts(src, cand, max_n):
    """Per level n=1..max_n: (distinct candidate n-grams, overlap with source)."""
    out = []
    for n in range(1, max_n + 1):
        cset = {tuple(cand[i:i + n]) for i in range(len(cand) - n + 1)}
        if not cset:
            out.append((0, 0))
            continue
        sset = {tuple(src[i:i + n]) for i in range(len(src) - n + 1)}
        out.append((len(cset), len(cset & sset)))
    return out


def window_repeat(tokens, n):
    """True iff some contiguous n-token window occurs at least twice."""
    seen = set()
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i:i + n])
        if g in seen:
            return True
        seen.add(g)
    return False


def clipped_counts(hyp, refs, max_n):
    """Per level n=1..max_n: (reference-clipped match count, hyp window count).

    Multi-reference clipping takes the per-n-gram maximum count across
    references.
    """
    out = []
    for n in range(1, max_n + 1):
        total = len(hyp) - n + 1
        if total <= 0:
            out.append((0, 0))
            continue
        hyp_counts = Counter(tuple(hyp[i:i + n]) for i in range(total))
        best = {}
        for ref in refs:
            rc = Counter(tuple(ref[i:i + n]) for i in range(len(ref) - n + 1))
            for g, c in rc.items():
                if c > best.get(g, 0):
                    best[g] = c
        clipped = sum(min(c, best.get(g, 0)) for g, c in hyp_counts.items())
        out.append((clipped, total))
    return out
