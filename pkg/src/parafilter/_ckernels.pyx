# distutils: language = c++
"""Compiled token-sequence kernels.

Operates on integer-encoded token sequences. The dispatcher
(parafilter.kernels) assigns dense ids per call and guarantees
(vocab_size)**n < 2**63, so every n-gram window packs injectively into
an unsigned 64-bit key.
"""

from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.utility cimport pair
from libcpp.vector cimport vector


def lcs_length(int64_t[::1] a, int64_t[::1] b):
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0]
    if la == 0 or lb == 0:
        return 0
    cdef vector[int] prev, cur
    prev.assign(lb + 1, 0)
    cur.assign(lb + 1, 0)
    cdef Py_ssize_t i, j
    cdef int pj, cj
    for i in range(la):
        cur[0] = 0
        for j in range(1, lb + 1):
            if a[i] == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev.swap(cur)
    return prev[lb]


cdef void _pack_windows(int64_t[::1] ids, int n, uint64_t base,
                        vector[uint64_t]& out):
    cdef Py_ssize_t i, m = ids.shape[0] - n + 1
    cdef int k
    cdef uint64_t key
    out.clear()
    if m <= 0:
        return
    out.reserve(m)
    for i in range(m):
        key = 0
        for k in range(n):
            key = key * base + <uint64_t> ids[i + k]
        out.push_back(key)


def pinc_counts(int64_t[::1] src, int64_t[::1] cand, int max_n, uint64_t base):
    cdef vector[uint64_t] keys
    cdef unordered_set[uint64_t] cset, sset
    cdef size_t i
    cdef int n
    cdef long long overlap
    cdef uint64_t key
    out = []
    for n in range(1, max_n + 1):
        _pack_windows(cand, n, base, keys)
        if keys.size() == 0:
            out.append((0, 0))
            continue
        cset.clear()
        for i in range(keys.size()):
            cset.insert(keys[i])
        _pack_windows(src, n, base, keys)
        sset.clear()
        for i in range(keys.size()):
            sset.insert(keys[i])
        overlap = 0
        for key in cset:
            if sset.count(key):
                overlap += 1
        out.append((<object> cset.size(), overlap))
    return out


def window_repeat(int64_t[::1] ids, int n, uint64_t base):
    cdef vector[uint64_t] keys
    _pack_windows(ids, n, base, keys)
    cdef unordered_set[uint64_t] seen
    cdef size_t i
    for i in range(keys.size()):
        if not seen.insert(keys[i]).second:
            return True
    return False


def clipped_counts(int64_t[::1] hyp, list refs, int max_n, uint64_t base):
    cdef vector[uint64_t] keys
    cdef unordered_map[uint64_t, long long] hyp_counts, best, rc
    cdef pair[uint64_t, long long] item
    cdef size_t i
    cdef int n
    cdef long long clipped, c
    cdef int64_t[::1] ref
    out = []
    for n in range(1, max_n + 1):
        _pack_windows(hyp, n, base, keys)
        if keys.size() == 0:
            out.append((0, 0))
            continue
        hyp_counts.clear()
        for i in range(keys.size()):
            hyp_counts[keys[i]] += 1
        total = <object> keys.size()
        best.clear()
        for ref_obj in refs:
            ref = ref_obj
            _pack_windows(ref, n, base, keys)
            rc.clear()
            for i in range(keys.size()):
                rc[keys[i]] += 1
            for item in rc:
                if item.second > best[item.first]:
                    best[item.first] = item.second
        clipped = 0
        for item in hyp_counts:
            c = best[item.first]
            clipped += item.second if item.second < c else c
        out.append((clipped, total))
    return out
