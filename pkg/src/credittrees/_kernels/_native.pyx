# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled split-scan kernels. Semantics match _fallback.py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport log2

cnp.import_array()

BACKEND = "native"


cdef inline double _entropy(double[::1] dist, Py_ssize_t k) noexcept:
    cdef double total = 0.0, h = 0.0, p
    cdef Py_ssize_t i
    for i in range(k):
        total += dist[i]
    if total <= 0.0:
        return 0.0
    for i in range(k):
        if dist[i] > 0.0:
            p = dist[i] / total
            h -= p * log2(p)
    return h


def rep_numeric_scan(double[::1] values, long[::1] cls, double[::1] weights,
                     double[::1] miss_cw):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t k = miss_cw.shape[0]
    cdef Py_ssize_t i, j, m, out
    empty = np.empty(0)
    if n < 2:
        return empty, empty, empty, empty

    m = 0
    for i in range(n - 1):
        if values[i + 1] > values[i]:
            m += 1
    if m == 0:
        return empty, empty, empty, empty

    thr_arr = np.empty(m)
    gain_arr = np.empty(m)
    lt_arr = np.empty(m)
    rt_arr = np.empty(m)
    cdef double[::1] thr = thr_arr
    cdef double[::1] gains = gain_arr
    cdef double[::1] lts = lt_arr
    cdef double[::1] rts = rt_arr

    parent_arr = np.asarray(miss_cw).copy()
    cdef double[::1] parent = parent_arr
    cdef double known_total = 0.0, miss_total = 0.0
    for i in range(n):
        parent[cls[i]] += weights[i]
        known_total += weights[i]
    for j in range(k):
        miss_total += miss_cw[j]
    cdef double total = known_total + miss_total
    cdef double h_parent = _entropy(parent, k)

    left_arr = np.zeros(k)
    ldist_arr = np.empty(k)
    rdist_arr = np.empty(k)
    cdef double[::1] left = left_arr
    cdef double[::1] ldist = ldist_arr
    cdef double[::1] rdist = rdist_arr
    cdef double lt, rt, frac, lt_full, rt_full

    out = 0
    lt = 0.0
    for i in range(n - 1):
        left[cls[i]] += weights[i]
        lt += weights[i]
        if values[i + 1] > values[i]:
            rt = known_total - lt
            frac = lt / known_total if known_total > 0.0 else 0.5
            lt_full = 0.0
            rt_full = 0.0
            for j in range(k):
                ldist[j] = left[j] + frac * miss_cw[j]
                rdist[j] = (parent[j] - miss_cw[j] - left[j]) + (1.0 - frac) * miss_cw[j]
                lt_full += ldist[j]
                rt_full += rdist[j]
            thr[out] = (values[i] + values[i + 1]) / 2.0
            gains[out] = (h_parent
                          - (lt_full / total) * _entropy(ldist, k)
                          - (rt_full / total) * _entropy(rdist, k))
            lts[out] = lt_full
            rts[out] = rt_full
            out += 1
    return thr_arr, gain_arr, lt_arr, rt_arr


def lad_numeric_scan(double[::1] values, double[:, ::1] zw, double[:, ::1] w,
                     double[::1] extra_zw, double[::1] extra_w):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t k = extra_zw.shape[0]
    cdef Py_ssize_t i, j, m, out
    if n < 2:
        return np.empty(0), np.empty(0)
    m = 0
    for i in range(n - 1):
        if values[i + 1] > values[i]:
            m += 1
    if m == 0:
        return np.empty(0), np.empty(0)

    thr_arr = np.empty(m)
    gain_arr = np.empty(m)
    cdef double[::1] thr = thr_arr
    cdef double[::1] gains = gain_arr

    tot_zw_arr = np.zeros(k)
    tot_w_arr = np.zeros(k)
    cum_zw_arr = np.zeros(k)
    cum_w_arr = np.zeros(k)
    cdef double[::1] tot_zw = tot_zw_arr
    cdef double[::1] tot_w = tot_w_arr
    cdef double[::1] cum_zw = cum_zw_arr
    cdef double[::1] cum_w = cum_w_arr
    for i in range(n):
        for j in range(k):
            tot_zw[j] += zw[i, j]
            tot_w[j] += w[i, j]

    cdef double g, lz, lw, rz, rw
    out = 0
    for i in range(n - 1):
        for j in range(k):
            cum_zw[j] += zw[i, j]
            cum_w[j] += w[i, j]
        if values[i + 1] > values[i]:
            g = 0.0
            for j in range(k):
                lz = cum_zw[j] + extra_zw[j]
                lw = cum_w[j] + extra_w[j]
                rz = (tot_zw[j] - cum_zw[j]) + extra_zw[j]
                rw = (tot_w[j] - cum_w[j]) + extra_w[j]
                if lw > 0.0:
                    g += lz * lz / lw
                if rw > 0.0:
                    g += rz * rz / rw
            thr[out] = (values[i] + values[i + 1]) / 2.0
            gains[out] = g
            out += 1
    return thr_arr, gain_arr
