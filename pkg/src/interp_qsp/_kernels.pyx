# cython: language_level=3
"""Compiled scalar kernels: Clenshaw, Laurent Horner, lagged-difference scan."""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


# Complex arithmetic is spelled out on real and imaginary parts, and the
# recurrences run with the point loop innermost. Both let the compiler
# vectorize across points; a per-point Horner chain is latency bound.


def clenshaw(coeffs, x):
    cdef double complex[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t n = c.shape[0]
    out_arr = np.zeros(m, dtype=np.complex128)
    if n == 0:
        return out_arr.reshape(np.shape(x))
    cdef double[:, ::1] b = np.zeros((4, m))  # rows: b1 re, b1 im, b2 re, b2 im
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, r
    cdef double cr, ci, tr, ti, two_x
    for r in range(n - 1, 0, -1):
        cr = c[r].real
        ci = c[r].imag
        for i in range(m):
            two_x = 2.0 * xs[i]
            tr = cr + two_x * b[0, i] - b[2, i]
            ti = ci + two_x * b[1, i] - b[3, i]
            b[2, i] = b[0, i]
            b[3, i] = b[1, i]
            b[0, i] = tr
            b[1, i] = ti
    for i in range(m):
        out[i].real = c[0].real + xs[i] * b[0, i] - b[2, i]
        out[i].imag = c[0].imag + xs[i] * b[1, i] - b[3, i]
    return out_arr.reshape(np.shape(x))


def laurent_horner(coeffs, z):
    cdef double complex[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    zarr = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef double[::1] zr = np.ascontiguousarray(zarr.real)
    cdef double[::1] zi = np.ascontiguousarray(zarr.imag)
    winv = 1.0 / zarr
    cdef double[::1] wr = np.ascontiguousarray(winv.real)
    cdef double[::1] wi = np.ascontiguousarray(winv.imag)
    cdef Py_ssize_t m = zarr.shape[0]
    cdef Py_ssize_t degree = (c.shape[0] - 1) // 2
    cdef double[::1] pr = np.full(m, c[2 * degree].real)
    cdef double[::1] pi_ = np.full(m, c[2 * degree].imag)
    cdef double[::1] nr = np.zeros(m)
    cdef double[::1] ni = np.zeros(m)
    cdef Py_ssize_t i, j
    cdef double cr, ci, tr, ur, ui
    for j in range(degree - 1, -1, -1):
        cr = c[degree + j].real
        ci = c[degree + j].imag
        for i in range(m):
            tr = pr[i] * zr[i] - pi_[i] * zi[i] + cr
            pi_[i] = pr[i] * zi[i] + pi_[i] * zr[i] + ci
            pr[i] = tr
    for j in range(degree, 0, -1):
        cr = c[degree - j].real
        ci = c[degree - j].imag
        for i in range(m):
            ur = nr[i] + cr
            ui = ni[i] + ci
            nr[i] = ur * wr[i] - ui * wi[i]
            ni[i] = ur * wi[i] + ui * wr[i]
    out_arr = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    for i in range(m):
        out[i].real = pr[i] + nr[i]
        out[i].imag = pi_[i] + ni[i]
    return out_arr.reshape(np.shape(z))


def max_lagged_difference(samples, Py_ssize_t max_lag):
    cdef double complex[::1] s = np.ascontiguousarray(samples, dtype=np.complex128)
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t i, lag
    cdef double best = 0.0
    cdef double dr, di, mag2
    if max_lag > n - 1:
        max_lag = n - 1
    for lag in range(1, max_lag + 1):
        for i in range(n - lag):
            dr = s[i + lag].real - s[i].real
            di = s[i + lag].imag - s[i].imag
            mag2 = dr * dr + di * di
            if mag2 > best:
                best = mag2
    return sqrt(best)
