# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel implementations.

Twin of ``pure.py``; keep branch conventions in lockstep with it.  The
cross-backend tests compare the two at tight tolerance, so any semantic
change must land in both files.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, pow

cnp.import_array()


def weibull_invert(double[::1] mass, double shape, double scale):
    cdef Py_ssize_t n = mass.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef double inv_shape = 1.0 / shape
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = pow(mass[i], inv_shape) * scale
    return out


def constant_invert(double[::1] mass, double rate):
    cdef Py_ssize_t n = mass.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    if rate > 0.0:
        for i in range(n):
            o[i] = mass[i] / rate
    else:
        for i in range(n):
            o[i] = INFINITY if mass[i] > 0.0 else 0.0
    return out


cdef inline Py_ssize_t _upper(double[::1] a, Py_ssize_t n, double x) noexcept nogil:
    # first index with a[i] > x  (np.searchsorted side="right")
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _lower(double* a, Py_ssize_t n, double x) noexcept nogil:
    # first index with a[i] >= x  (np.searchsorted side="left")
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef cnp.ndarray[cnp.float64_t, ndim=1] _prefix(double[::1] edges, double[::1] rates):
    cdef Py_ssize_t m = edges.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prefix = np.empty(m + 1)
    cdef double[::1] p = prefix
    cdef double acc = 0.0, left = 0.0
    cdef Py_ssize_t k
    p[0] = 0.0
    for k in range(m):
        acc = acc + rates[k] * (edges[k] - left)
        p[k + 1] = acc
        left = edges[k]
    return prefix


def piecewise_rate(double[::1] t, double[::1] edges, double[::1] rates):
    cdef Py_ssize_t n = t.shape[0], m = edges.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = rates[_upper(edges, m, t[i])]
    return out


def piecewise_cumhaz(double[::1] t, double[::1] edges, double[::1] rates):
    cdef Py_ssize_t n = t.shape[0], m = edges.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prefix = _prefix(edges, rates)
    cdef double[::1] p = prefix
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef double left
    for i in range(n):
        k = _upper(edges, m, t[i])
        left = 0.0 if k == 0 else edges[k - 1]
        o[i] = p[k] + rates[k] * (t[i] - left)
    return out


def piecewise_invert(double[::1] mass, double[::1] edges, double[::1] rates):
    cdef Py_ssize_t n = mass.shape[0], m = edges.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prefix = _prefix(edges, rates)
    cdef double[::1] p = prefix
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef double r, left
    for i in range(n):
        k = _lower(&p[1], m, mass[i])
        r = rates[k]
        left = 0.0 if k == 0 else edges[k - 1]
        if r == 0.0:
            o[i] = INFINITY if (k == m and mass[i] > p[m]) else left
        else:
            o[i] = left + (mass[i] - p[k]) / r
    return out


def product_limit(double[::1] times, cnp.int64_t[::1] events):
    cdef Py_ssize_t n = times.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] uniq = np.empty(n)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] at_risk = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] deaths = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] surv = np.empty(n, dtype=np.float64)
    cdef double[::1] u = uniq
    cdef cnp.int64_t[::1] risk = at_risk
    cdef cnp.int64_t[::1] d = deaths
    cdef double[::1] s = surv
    cdef Py_ssize_t i = 0, j, out = 0
    cdef cnp.int64_t dk
    cdef double running = 1.0
    while i < n:
        j = i
        dk = 0
        while j < n and times[j] == times[i]:
            dk += events[j]
            j += 1
        u[out] = times[i]
        risk[out] = n - i
        d[out] = dk
        running = running * (1.0 - (<double>dk) / (<double>(n - i)))
        s[out] = running
        out += 1
        i = j
    return uniq[:out].copy(), at_risk[:out].copy(), deaths[:out].copy(), surv[:out].copy()
