# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Fraction-free integer row reduction with overflow detection.

Same algorithm as ``_elim_py.rref_int``. Input and output entries are int64;
the working matrix is 128-bit because intermediate values grow well past the
final ones. Any overflow raises OverflowError and the caller retries on
Python ints.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    """
    typedef __int128 i128;
    static inline int _mul_ovf(i128 a, i128 b, i128 *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int _sub_ovf(i128 a, i128 b, i128 *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    ctypedef long long i128  # Cython-side placeholder; the C type is __int128
    int _mul_ovf(i128 a, i128 b, i128 *r) nogil
    int _sub_ovf(i128 a, i128 b, i128 *r) nogil


cdef inline i128 _gcd(i128 a, i128 b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef void _normalize(i128* row, Py_ssize_t ncols, Py_ssize_t pos_col) noexcept nogil:
    cdef i128 g = 0
    cdef Py_ssize_t j
    for j in range(ncols):
        if row[j] != 0:
            g = _gcd(g, row[j])
            if g == 1:
                break
    if pos_col >= 0 and row[pos_col] < 0:
        g = -g if g != 0 else -1
    if g != 0 and g != 1:
        for j in range(ncols):
            if row[j] != 0:
                row[j] = row[j] // g


cdef int _reduce(i128* a, Py_ssize_t m, Py_ssize_t ncols, Py_ssize_t* pivots, Py_ssize_t* rank) noexcept nogil:
    cdef Py_ssize_t r = 0, col, i, j, piv, start
    cdef i128 p, b, g, s, t, x, y, tmp
    cdef i128* prow
    cdef i128* row
    for col in range(ncols):
        if r >= m:
            break
        piv = -1
        for i in range(r, m):
            if a[i * ncols + col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = a[r * ncols + j]
                a[r * ncols + j] = a[piv * ncols + j]
                a[piv * ncols + j] = tmp
        prow = a + r * ncols
        _normalize(prow, ncols, col)
        p = prow[col]
        for i in range(m):
            if i == r:
                continue
            row = a + i * ncols
            b = row[col]
            if b == 0:
                continue
            g = _gcd(p, b)
            s = p // g
            t = b // g
            # rows above the pivot carry entries left of ``col``
            start = 0 if i < r else col
            for j in range(start, ncols):
                if _mul_ovf(s, row[j], &x):
                    return -1
                if _mul_ovf(t, prow[j], &y):
                    return -1
                if _sub_ovf(x, y, &row[j]):
                    return -1
            _normalize(row, ncols, -1)
        pivots[r] = col
        r += 1
    rank[0] = r
    return 0


def rref_int64(rows, Py_ssize_t ncols):
    """Return ``(rows, pivots)`` like ``_elim_py.rref_int``; raise OverflowError on overflow."""
    cdef Py_ssize_t m = len(rows)
    if m == 0 or ncols == 0:
        return [], []
    src = np.ascontiguousarray(np.array(rows, dtype=np.int64).reshape(m, ncols))
    cdef long long[:, ::1] view = src
    cdef i128* a = <i128*> malloc(m * ncols * sizeof(i128))
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, j, rank = 0
    cdef int status
    cdef long long lim = 9223372036854775807
    if a == NULL or piv == NULL:
        free(a)
        free(piv)
        raise MemoryError()
    try:
        for i in range(m):
            for j in range(ncols):
                a[i * ncols + j] = view[i, j]
        with nogil:
            status = _reduce(a, m, ncols, piv, &rank)
        if status != 0:
            raise OverflowError("overflow during elimination")
        out = np.empty((rank, ncols), dtype=np.int64)
        for i in range(rank):
            for j in range(ncols):
                if a[i * ncols + j] > <i128> lim or a[i * ncols + j] < -<i128> lim:
                    raise OverflowError("result does not fit in int64")
                out[i, j] = <long long> a[i * ncols + j]
        return out.tolist(), [int(piv[i]) for i in range(rank)]
    finally:
        free(a)
        free(piv)
