# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled box enumeration for the brute-force ILP oracle.

Same contract as ``_kernels_py.enumerate_box``; all values must fit in int64
(the caller checks).
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def enumerate_box(lo, hi, a, b):
    cdef Py_ssize_t n = len(lo)
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t i, j
    cdef int64_t total, best_total = -1, span
    cdef long long visited = 0
    cdef bint feasible, found = False

    for j in range(n):
        if lo[j] > hi[j]:
            return None, 0, 0

    cdef int64_t *x = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *xl = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *xh = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *best = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *cols = <int64_t *> malloc((n * m + 1) * sizeof(int64_t))
    cdef int64_t *sums = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    cdef int64_t *rhs = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    if not (x and xl and xh and best and cols and sums and rhs):
        free(x); free(xl); free(xh); free(best); free(cols); free(sums); free(rhs)
        raise MemoryError()

    try:
        total = 0
        for j in range(n):
            xl[j] = lo[j]
            xh[j] = hi[j]
            x[j] = xh[j]
            total += x[j]
        for i in range(m):
            rhs[i] = b[i]
            sums[i] = 0
            for j in range(n):
                cols[j * m + i] = a[i][j]
                sums[i] += cols[j * m + i] * x[j]

        with nogil:
            while True:
                visited += 1
                if total > best_total:
                    feasible = True
                    for i in range(m):
                        if sums[i] > rhs[i]:
                            feasible = False
                            break
                    if feasible:
                        found = True
                        best_total = total
                        for i in range(n):
                            best[i] = x[i]
                j = n - 1
                while j >= 0 and x[j] == xl[j]:
                    span = xh[j] - xl[j]
                    if span:
                        x[j] = xh[j]
                        total += span
                        for i in range(m):
                            sums[i] += cols[j * m + i] * span
                    j -= 1
                if j < 0:
                    break
                x[j] -= 1
                total -= 1
                for i in range(m):
                    sums[i] -= cols[j * m + i]

        if not found:
            return None, 0, visited
        return [best[j] for j in range(n)], best_total, visited
    finally:
        free(x); free(xl); free(xh); free(best); free(cols); free(sums); free(rhs)
