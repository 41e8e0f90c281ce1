# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline long long _inv(long long a, long long p) nogil:
    cdef long long t = 0, nt = 1, r = p, nr = a, qq, tmp
    while nr != 0:
        qq = r // nr
        tmp = t - qq * nt
        t = nt
        nt = tmp
        tmp = r - qq * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def batch_rank(mats, long long p):
    """Ranks over F_p of a stack of matrices, shape (B, R, C)."""
    cdef cnp.ndarray[cnp.int64_t, ndim=3] A = np.ascontiguousarray(np.asarray(mats, dtype=np.int64) % p)
    cdef Py_ssize_t B = A.shape[0], R = A.shape[1], C = A.shape[2]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(B, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] W = np.empty((R, C), dtype=np.int64)
    cdef long long[:, :, ::1] Av = A
    cdef long long[:, ::1] Wv = W
    cdef long long[::1] outv = out
    cdef Py_ssize_t b, r, c, j, piv, row
    cdef long long f, iv, tmp
    with nogil:
        for b in range(B):
            for r in range(R):
                for c in range(C):
                    Wv[r, c] = Av[b, r, c]
            row = 0
            for c in range(C):
                if row >= R:
                    break
                piv = -1
                for r in range(row, R):
                    if Wv[r, c] != 0:
                        piv = r
                        break
                if piv < 0:
                    continue
                if piv != row:
                    for j in range(c, C):
                        tmp = Wv[row, j]
                        Wv[row, j] = Wv[piv, j]
                        Wv[piv, j] = tmp
                iv = _inv(Wv[row, c], p)
                for j in range(c, C):
                    Wv[row, j] = Wv[row, j] * iv % p
                for r in range(row + 1, R):
                    f = Wv[r, c]
                    if f != 0:
                        for j in range(c, C):
                            Wv[r, j] = (Wv[r, j] - f * Wv[row, j]) % p
                            if Wv[r, j] < 0:
                                Wv[r, j] += p
                row += 1
            outv[b] = row
    return out
