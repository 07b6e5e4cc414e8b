# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; same API as `_kernels_py`."""

from libc.stdlib cimport malloc, free

from twistkit._kernels_py import _kronecker_mul, _all_ints, KRONECKER_THRESHOLD


def dense_mul(list a, list b):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    cdef object x, y
    if la == 0 or lb == 0:
        return []
    if la * lb >= KRONECKER_THRESHOLD and _all_ints(a) and _all_ints(b):
        return _kronecker_mul(a, b)
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        x = a[i]
        if x:
            for j in range(lb):
                y = b[j]
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def dense_divmod_monic(f, list tail, Py_ssize_t dg):
    cdef list r = list(f)
    cdef Py_ssize_t n = len(r), i, s, e, t, nt = len(tail)
    cdef object c
    if n <= dg:
        return [], r + [0] * (dg - n)
    cdef list q = [0] * (n - dg)
    cdef list exps = [pair[0] for pair in tail]
    cdef list gs = [pair[1] for pair in tail]
    for i in range(n - 1, dg - 1, -1):
        c = r[i]
        if c:
            s = i - dg
            q[s] = c
            for t in range(nt):
                e = exps[t]
                r[s + e] = r[s + e] - c * gs[t]
    return q, r[:dg]


cdef void _fkm(int L, int t, int p, int* a, list out):
    cdef unsigned long long code
    cdef int i
    if t > L:
        if L % p == 0:
            code = 0
            for i in range(1, L + 1):
                code = (code << 1) | <unsigned long long>a[i]
            out.append((code, p))
        return
    a[t] = a[t - p]
    _fkm(L, t + 1, p, a, out)
    if a[t - p] == 0:
        a[t] = 1
        _fkm(L, t + 1, t, a, out)


def binary_necklaces(int L):
    if L <= 0:
        return [(0, 1)] if L == 0 else []
    if L > 63:
        raise ValueError("word length above 63 bits")
    cdef int* a = <int*>malloc((L + 1) * sizeof(int))
    cdef list out = []
    cdef int i
    for i in range(L + 1):
        a[i] = 0
    try:
        _fkm(L, 1, 1, a, out)
    finally:
        free(a)
    return out


def canonical_rotation(unsigned long long code, int L):
    cdef unsigned long long mask = (1ULL << L) - 1
    cdef unsigned long long best = code, cur = code
    cdef int s
    for s in range(1, L + 1):
        cur = ((cur << 1) | (cur >> (L - 1))) & mask
        if cur == code:
            return best, s
        if cur < best:
            best = cur
    return best, L
