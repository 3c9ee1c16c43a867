# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the two hot kernels in ``_kernel_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

ctypedef long long i64


def magnus_runs(runs, int d, int p):
    cdef i64[:, ::1] r = np.ascontiguousarray(np.asarray(runs, dtype=np.int64).reshape(-1, 2))
    cdef Py_ssize_t size = 1 + d + d * d + d * d * d
    out = np.zeros(size, dtype=np.int64)
    cdef i64[::1] c = out
    cdef Py_ssize_t o1 = 1, o2 = 1 + d, o3 = 1 + d + d * d
    cdef Py_ssize_t t, i, j, g
    cdef i64 e, b1, b2, b3, num, den
    c[0] = 1
    for t in range(r.shape[0]):
        g = r[t, 0]
        e = r[t, 1]
        b1 = e % p
        num = e * (e - 1)
        b2 = (num // 2) % p
        num = e * (e - 1) * (e - 2)
        b3 = (num // 6) % p
        if b1 < 0:
            b1 += p
        if b2 < 0:
            b2 += p
        if b3 < 0:
            b3 += p
        for i in range(d):
            for j in range(d):
                c[o3 + (i * d + j) * d + g] = (c[o3 + (i * d + j) * d + g] + b1 * c[o2 + i * d + j]) % p
            c[o3 + (i * d + g) * d + g] = (c[o3 + (i * d + g) * d + g] + b2 * c[o1 + i]) % p
        c[o3 + (g * d + g) * d + g] = (c[o3 + (g * d + g) * d + g] + b3 * c[0]) % p
        for i in range(d):
            c[o2 + i * d + g] = (c[o2 + i * d + g] + b1 * c[o1 + i]) % p
        c[o2 + g * d + g] = (c[o2 + g * d + g] + b2 * c[0]) % p
        c[o1 + g] = (c[o1 + g] + b1 * c[0]) % p
    return out


cdef inline void _mul(i64* a, i64* b, i64* out, int n, i64 p) noexcept nogil:
    # unitriangular product: only i <= l <= j contributes
    cdef int i, j, l
    cdef i64 s
    for i in range(n):
        for j in range(n):
            if j < i:
                out[i * n + j] = 0
                continue
            s = 0
            for l in range(i, j + 1):
                s += a[i * n + l] * b[l * n + j]
            out[i * n + j] = s % p


cdef inline void _inverse(i64* m, i64* out, int n, i64 p) noexcept nogil:
    # back substitution on the unitriangular system m @ out = I
    cdef int i, j, l
    cdef i64 s
    for i in range(n):
        for j in range(n):
            out[i * n + j] = 1 if i == j else 0
    for j in range(n):
        for i in range(j - 1, -1, -1):
            s = 0
            for l in range(i + 1, j + 1):
                s += m[i * n + l] * out[l * n + j]
            s = (-s) % p
            if s < 0:
                s += p
            out[i * n + j] = s


def scan(words, want_zero, base, slots, checks, int p, i64 start, i64 stop, i64 limit):
    cdef i64[:, :, ::1] bv = np.ascontiguousarray(np.asarray(base, dtype=np.int64))
    cdef i64[:, ::1] sv = np.ascontiguousarray(np.asarray(slots, dtype=np.int64).reshape(-1, 3))
    cdef i64[:, ::1] cv = np.ascontiguousarray(np.asarray(checks, dtype=np.int64).reshape(-1, 2))
    packed = [np.asarray(w, dtype=np.int64).reshape(-1, 2) for w in words]
    offsets_np = np.zeros(len(packed) + 1, dtype=np.int64)
    for wi, w in enumerate(packed):
        offsets_np[wi + 1] = offsets_np[wi] + len(w)
    runs_np = (np.concatenate(packed) if packed else np.zeros((0, 2), dtype=np.int64))
    cdef i64[:, ::1] runs = np.ascontiguousarray(runs_np)
    cdef i64[::1] offs = offsets_np
    cdef i64[::1] wz = np.asarray(want_zero, dtype=np.int64)

    cdef int d = bv.shape[0]
    cdef int n = bv.shape[1]
    cdef int k = sv.shape[0]
    cdef int nc = cv.shape[0]
    cdef int nw = len(packed)
    cdef int nn = n * n
    cdef i64 span = stop - start if stop > start else 0
    cdef i64 cap = span if limit < 0 else min(limit, span)

    hits_np = np.zeros(max(cap, 1), dtype=np.int64)
    cdef i64[::1] hits = hits_np
    need_np = np.zeros(d, dtype=np.int64)
    for w in packed:
        for gi, ei in w.tolist():
            if ei < 0:
                need_np[gi] = 1
    cdef i64[::1] need = need_np

    cdef i64* mats = <i64*> malloc(d * nn * sizeof(i64))
    cdef i64* invs = <i64*> malloc(d * nn * sizeof(i64))
    cdef i64* acc = <i64*> malloc(nn * sizeof(i64))
    cdef i64* tmp = <i64*> malloc(nn * sizeof(i64))
    cdef i64* swap
    cdef i64 idx, rem, nhits = 0, scanned = 0
    cdef int t, g, w_i, r_i, rep, cnt, c_i
    cdef i64 e
    cdef bint ok, zero
    if mats == NULL or invs == NULL or acc == NULL or tmp == NULL:
        free(mats); free(invs); free(acc); free(tmp)
        raise MemoryError()
    try:
        with nogil:
            memcpy(mats, &bv[0, 0, 0], d * nn * sizeof(i64))
            idx = start
            while idx < stop and (limit < 0 or nhits < limit):
                rem = idx
                for t in range(k):
                    mats[sv[t, 0] * nn + sv[t, 1] * n + sv[t, 2]] = rem % p
                    rem = rem // p
                for g in range(d):
                    if need[g]:
                        _inverse(mats + g * nn, invs + g * nn, n, p)
                ok = True
                for w_i in range(nw):
                    memset(acc, 0, nn * sizeof(i64))
                    for t in range(n):
                        acc[t * n + t] = 1
                    for r_i in range(offs[w_i], offs[w_i + 1]):
                        g = runs[r_i, 0]
                        e = runs[r_i, 1]
                        cnt = e if e > 0 else -e
                        for rep in range(cnt):
                            if e > 0:
                                _mul(acc, mats + g * nn, tmp, n, p)
                            else:
                                _mul(acc, invs + g * nn, tmp, n, p)
                            swap = acc
                            acc = tmp
                            tmp = swap
                    zero = True
                    for c_i in range(nc):
                        if acc[cv[c_i, 0] * n + cv[c_i, 1]] != 0:
                            zero = False
                            break
                    if zero != (wz[w_i] != 0):
                        ok = False
                        break
                if ok:
                    hits[nhits] = idx
                    nhits += 1
                idx += 1
            scanned = idx - start
    finally:
        free(mats); free(invs); free(acc); free(tmp)
    return hits_np[:nhits].tolist(), scanned
