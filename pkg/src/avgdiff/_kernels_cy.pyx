# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the per-step kernels.

See ``avgdiff._kernels_py`` for the reference implementations and the
docstrings; the two modules are signature compatible.
"""

from libc.math cimport cos, fabs

import numpy as np


def central_diff(const double[::1] u, double dx):
    cdef Py_ssize_t n = u.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s = 0.5 / dx
    cdef Py_ssize_t k, up, um
    for k in range(n):
        up = k + 1 if k + 1 < n else 0
        um = k - 1 if k >= 1 else n - 1
        out[k] = (u[up] - u[um]) * s
    return out_arr


def forward_diff(const double[::1] u, double dx):
    cdef Py_ssize_t n = u.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s = 1.0 / dx
    cdef Py_ssize_t k, up
    for k in range(n):
        up = k + 1 if k + 1 < n else 0
        out[k] = (u[up] - u[k]) * s
    return out_arr


def forward_average(const double[::1] u):
    cdef Py_ssize_t n = u.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, up
    for k in range(n):
        up = k + 1 if k + 1 < n else 0
        out[k] = (u[up] + u[k]) * 0.5
    return out_arr


def poly_eval(const double[::1] coeffs, const double[::1] u):
    cdef Py_ssize_t n = u.shape[0], np_ = coeffs.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, p
    cdef double acc
    for k in range(n):
        acc = coeffs[np_ - 1]
        for p in range(np_ - 2, -1, -1):
            acc = acc * u[k] + coeffs[p]
        out[k] = acc
    return out_arr


def divided_difference(const double[::1] coeffs, const double[::1] a,
                       const double[::1] b):
    cdef Py_ssize_t n = a.shape[0], np_ = coeffs.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, p
    cdef double h, bpow, acc, av, bv
    for k in range(n):
        av = a[k]
        bv = b[k]
        h = 0.0
        bpow = 1.0
        acc = 0.0
        for p in range(1, np_):
            h = av * h + bpow
            bpow = bpow * bv
            if coeffs[p] != 0.0:
                acc = acc + coeffs[p] * h
        out[k] = acc
    return out_arr


def cosine_series(const double[::1] amps, const double[::1] modes,
                  const double[::1] shifts, const double[::1] x):
    cdef Py_ssize_t nterms = amps.shape[0], npts = x.shape[0]
    out_arr = np.zeros(npts)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double xk, acc
    for k in range(npts):
        xk = x[k]
        acc = 0.0
        for i in range(nterms):
            acc += amps[i] * cos(modes[i] * xk - shifts[i])
        out[k] = acc
    return out_arr


def total_variation(const double[::1] u):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t k, up
    cdef double acc = 0.0
    for k in range(n):
        up = k + 1 if k + 1 < n else 0
        acc += fabs(u[up] - u[k])
    return acc
