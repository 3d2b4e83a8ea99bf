# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: complex Lanczos Gamma and strided bivariate Horner."""
import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex clog(double complex)
    double complex cexp(double complex)
    double complex conj(double complex)

cdef double LANCZOS_G = 7.0
cdef double[9] LC = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double PI = 3.141592653589793
cdef double HALF_LOG_2PI = 0.9189385332046727
cdef double LOG_PI = 1.1447298858494002
cdef double complex I = 1j


cdef inline double complex _lanczos_log(double complex z) nogil:
    cdef double complex x, t
    cdef int i
    z = z - 1.0
    x = LC[0]
    for i in range(1, 9):
        x = x + LC[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * clog(t) - t + clog(x)


cdef inline double complex _log_sin_pi(double complex z) nogil:
    cdef bint upper = z.imag >= 0
    cdef double complex zu = z if upper else conj(z)
    cdef double complex val = -I * PI * zu + clog(1.0 - cexp(2.0 * I * PI * zu)) - clog(-2.0 * I)
    return val if upper else conj(val)


cdef inline double complex _clgamma(double complex z) nogil:
    if z.real >= 0.5:
        return _lanczos_log(z)
    return LOG_PI - _log_sin_pi(z) - _lanczos_log(1.0 - z)


def clgamma(z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zf = np.ascontiguousarray(
        np.asarray(z, dtype=complex).ravel())
    cdef Py_ssize_t n = zf.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=complex)
    with nogil:
        for i in range(n):
            out[i] = _clgamma(zf[i])
    return out.reshape(np.shape(z))


def cgamma(z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zf = np.ascontiguousarray(
        np.asarray(z, dtype=complex).ravel())
    cdef Py_ssize_t n = zf.shape[0], i
    cdef double complex v
    cdef bint pole = False
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=complex)
    with nogil:
        for i in range(n):
            v = zf[i]
            if v.imag == 0 and v.real <= 0 and v.real == <double>(<long>v.real):
                pole = True
                break
            out[i] = cexp(_clgamma(v))
    if pole:
        raise ValueError("gamma pole at nonpositive integer")
    return out.reshape(np.shape(z))


def bipoly_grid(coeffs, int upsilon, ys, zs):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] c = np.ascontiguousarray(coeffs, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yv = np.ascontiguousarray(ys, dtype=float).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zv = np.ascontiguousarray(zs, dtype=float).ravel()
    cdef Py_ssize_t nl = c.shape[0], ns = c.shape[1]
    cdef Py_ssize_t ny = yv.shape[0], nz = zv.shape[0]
    cdef Py_ssize_t i, j, l, s
    cdef int e
    cdef double w, acc, y, tot
    cdef cnp.ndarray[cnp.float64_t, ndim=2] rows = np.empty((nz, nl))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((ny, nz))
    with nogil:
        for j in range(nz):
            w = 1.0
            for e in range(upsilon):
                w = w * zv[j]
            for l in range(nl):
                acc = 0.0
                for s in range(ns - 1, -1, -1):
                    acc = acc * w + c[l, s]
                rows[j, l] = acc
        for i in range(ny):
            y = yv[i]
            for j in range(nz):
                tot = 0.0
                for l in range(nl - 1, -1, -1):
                    tot = tot * y + rows[j, l]
                out[i, j] = tot
    return out
