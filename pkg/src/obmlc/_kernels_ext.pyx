# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-sample kernels. Same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, fabs

cnp.import_array()

cdef double LN2 = 0.6931471805599453


cdef inline double softplus(double u) nogil:
    if u > 0.0:
        return u + log1p(exp(-u))
    return log1p(exp(u))


cdef inline double log_2cosh(double x) nogil:
    cdef double ax = fabs(x)
    return ax + log1p(exp(-2.0 * ax))


def llr_ob(z, double amplitude, double sigma):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef Py_ssize_t n = zz.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double s2 = sigma * sigma
    cdef double c = LN2 + amplitude * amplitude / (2.0 * s2)
    cdef double g = amplitude / s2
    with nogil:
        for k in range(n):
            out[k] = c - log_2cosh(zz[k] * g)
    return out.reshape(np.shape(z))


def llr_cb(z, double amplitude, double sigma):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef Py_ssize_t n = zz.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double g = 2.0 * amplitude / (sigma * sigma)
    with nogil:
        for k in range(n):
            out[k] = g * zz[k]
    return out.reshape(np.shape(z))


def ob_integrand(w, double r):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ww = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ww.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double r2 = r * r, t, u1, u2, u3
    with nogil:
        for k in range(n):
            t = 2.0 * r * ww[k]
            u1 = log_2cosh(t) - LN2 - r2
            u2 = LN2 - t - r2 - softplus(-2.0 * t - 4.0 * r2)
            u3 = LN2 + t - r2 - softplus(2.0 * t - 4.0 * r2)
            out[k] = (0.5 * softplus(u1) + 0.25 * softplus(u2) + 0.25 * softplus(u3)) / LN2
    return out.reshape(np.shape(w))


def bpsk_integrand(w, double a):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ww = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ww.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double a2 = a * a
    with nogil:
        for k in range(n):
            out[k] = softplus(-4.0 * a * ww[k] - 4.0 * a2) / LN2
    return out.reshape(np.shape(w))


def lq_integrand(x, y, double r):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xx = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yy = np.ascontiguousarray(y, dtype=np.float64).ravel()
    if xx.shape[0] != yy.shape[0]:
        raise ValueError("x and y must have the same size")
    cdef Py_ssize_t n = xx.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double r2 = r * r, tx, ty, cx, cy, acc
    with nogil:
        for k in range(n):
            tx = 2.0 * r * xx[k]
            ty = 2.0 * r * yy[k]
            cy = log_2cosh(ty) - 2.0 * r2
            cx = log_2cosh(tx) - 2.0 * r2
            acc = softplus(-tx + cy - softplus(-2.0 * tx - 4.0 * r2))
            acc += softplus(tx + cy - softplus(2.0 * tx - 4.0 * r2))
            acc += softplus(-ty + cx - softplus(-2.0 * ty - 4.0 * r2))
            acc += softplus(ty + cx - softplus(2.0 * ty - 4.0 * r2))
            out[k] = 0.25 * acc / LN2
    return out.reshape(np.shape(x))
