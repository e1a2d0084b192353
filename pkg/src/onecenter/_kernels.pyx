# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled weighted-selection kernel.

Selects the smallest value whose cumulative weight reaches a target in
worst-case linear time.  Pivots come from median-of-medians (groups of
five), so there is no randomness anywhere: repeated runs on the same
input are bit-identical, which the determinism guarantees of the
library rely on.
"""

from libc.stdlib cimport malloc, free


cdef inline void _insertion_sort(double* v, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double t
    for i in range(lo + 1, hi):
        t = v[i]
        j = i
        while j > lo and v[j - 1] > t:
            v[j] = v[j - 1]
            j -= 1
        v[j] = t


cdef double _median_of_medians(double* v, Py_ssize_t n, double* scratch) noexcept nogil:
    # v is scratch space: it gets permuted freely.
    cdef Py_ssize_t i, lo, hi, groups
    while n > 5:
        groups = 0
        i = 0
        while i < n:
            lo = i
            hi = i + 5
            if hi > n:
                hi = n
            _insertion_sort(v, lo, hi)
            scratch[groups] = v[lo + (hi - lo - 1) // 2]
            groups += 1
            i += 5
        for i in range(groups):
            v[i] = scratch[i]
        n = groups
    _insertion_sort(v, 0, n)
    return v[(n - 1) // 2]


cdef double _select(double* vals, double* wts, Py_ssize_t n, double target,
                    double* pivbuf, double* scratch) noexcept nogil:
    cdef Py_ssize_t i, lt, gt
    cdef double pivot, w_lt, w_eq, tv, tw
    while True:
        if n == 1:
            return vals[0]
        for i in range(n):
            pivbuf[i] = vals[i]
        pivot = _median_of_medians(pivbuf, n, scratch)
        # three-way partition: [< pivot | == pivot | > pivot]
        lt = 0
        gt = n
        w_lt = 0.0
        w_eq = 0.0
        i = 0
        while i < gt:
            if vals[i] < pivot:
                tv = vals[i]; vals[i] = vals[lt]; vals[lt] = tv
                tw = wts[i]; wts[i] = wts[lt]; wts[lt] = tw
                w_lt += wts[lt]
                lt += 1
                i += 1
            elif vals[i] > pivot:
                gt -= 1
                tv = vals[i]; vals[i] = vals[gt]; vals[gt] = tv
                tw = wts[i]; wts[i] = wts[gt]; wts[gt] = tw
            else:
                w_eq += wts[i]
                i += 1
        if target <= w_lt and lt > 0:
            n = lt
        elif target <= w_lt + w_eq:
            return pivot
        elif gt == n:
            # target exceeds the remaining total (callers guard against
            # this; reachable only through rounding): best effort is the
            # largest value present, which is the pivot here.
            return pivot
        else:
            target -= w_lt + w_eq
            vals += gt
            wts += gt
            n -= gt


def weighted_select(const double[::1] values, const double[::1] weights, double target):
    """Smallest v in values with sum(weights[values <= v]) >= target.

    Requires n >= 1 and target > 0.  If target exceeds the total weight,
    the maximum value is returned; callers that need an infinite sentinel
    check the total first.
    """
    cdef Py_ssize_t n = values.shape[0]
    if n == 0:
        raise ValueError("weighted_select: empty input")
    if weights.shape[0] != n:
        raise ValueError("weighted_select: values and weights differ in length")
    cdef double* buf = <double*> malloc(4 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* vals = buf
    cdef double* wts = buf + n
    cdef double* pivbuf = buf + 2 * n
    cdef double* scratch = buf + 3 * n
    cdef Py_ssize_t i
    for i in range(n):
        vals[i] = values[i]
        wts[i] = weights[i]
    cdef double out
    with nogil:
        out = _select(vals, wts, n, target, pivbuf, scratch)
    free(buf)
    return out
