# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


def laguerre(int p, double alpha, x):
    cdef cnp.ndarray[double, ndim=1] xs = np.ascontiguousarray(np.ravel(x), dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], i
    cdef int k
    cdef double prev, cur, nxt, xi
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        xi = xs[i]
        prev = 1.0
        if p == 0:
            o[i] = 1.0
            continue
        cur = 1.0 + alpha - xi
        for k in range(1, p):
            nxt = ((2 * k + 1 + alpha - xi) * cur - (k + alpha) * prev) / (k + 1)
            prev = cur
            cur = nxt
        o[i] = cur
    return out.reshape(np.shape(x))


def raise_apply(double complex[::1] psi, long[:, ::1] raise_idx,
                double[:, ::1] raise_sqrt, double complex[::1] coeffs):
    cdef Py_ssize_t m = raise_idx.shape[0], n = raise_idx.shape[1], k, i
    cdef long t
    cdef double complex c
    out = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    for k in range(m):
        c = coeffs[k]
        if c == 0:
            continue
        for i in range(n):
            t = raise_idx[k, i]
            if t >= 0 and psi[i] != 0:
                o[t] = o[t] + c * raise_sqrt[k, i] * psi[i]
    return out


cdef void _overlaps(double re, double im, int dim, double complex* out) noexcept nogil:
    cdef double complex a = re + 1j * im
    cdef int n
    out[0] = exp(-0.5 * (re * re + im * im))
    for n in range(1, dim):
        out[n] = out[n - 1] * a / sqrt(<double>n)


cdef double _proj(const double complex[:, ::1] rho, const double complex* u, int dim) noexcept nogil:
    # Re(u^dag rho u) with the complex products spelled out in real arithmetic.
    cdef int i, j
    cdef const double complex* r
    cdef double acc = 0, sr, si, ar, ai, br, bi
    for i in range(dim):
        r = &rho[i, 0]
        sr = 0
        si = 0
        for j in range(dim):
            ar = r[j].real
            ai = r[j].imag
            br = u[j].real
            bi = u[j].imag
            sr = sr + ar * br - ai * bi
            si = si + ar * bi + ai * br
        acc = acc + u[i].real * sr + u[i].imag * si
    return acc


cdef void _kron(const double complex* a, int da, const double complex* b, int db,
                double complex* out) noexcept nogil:
    cdef int i, j
    for i in range(da):
        for j in range(db):
            out[i * db + j] = a[i] * b[j]


cdef void _proj4(const double complex[:, ::1] rho, const double complex* v, int dim, double* out) noexcept nogil:
    # Four quadratic forms Re(v_k^dag rho v_k) in one sweep over rho; v holds
    # the vectors back to back (v_k = v + k * dim).
    cdef int i, j, k
    cdef const double complex* r
    cdef double ar, ai, br, bi
    cdef double sr[4]
    cdef double si[4]
    for k in range(4):
        out[k] = 0
    for i in range(dim):
        r = &rho[i, 0]
        for k in range(4):
            sr[k] = 0
            si[k] = 0
        for j in range(dim):
            ar = r[j].real
            ai = r[j].imag
            for k in range(4):
                br = v[k * dim + j].real
                bi = v[k * dim + j].imag
                sr[k] = sr[k] + ar * br - ai * bi
                si[k] = si[k] + ar * bi + ai * br
        for k in range(4):
            out[k] = out[k] + v[k * dim + i].real * sr[k] + v[k * dim + i].imag * si[k]


def ch_value(const double complex[:, ::1] rho, const double complex[:, ::1] rho_a,
             const double complex[:, ::1] rho_b, int d0, int d1, const double[::1] x):
    cdef double complex[::1] a1 = np.empty(d0, dtype=np.complex128)
    cdef double complex[::1] a2 = np.empty(d0, dtype=np.complex128)
    cdef double complex[::1] b1 = np.empty(d1, dtype=np.complex128)
    cdef double complex[::1] b2 = np.empty(d1, dtype=np.complex128)
    cdef int dim = d0 * d1
    cdef double complex[::1] v = np.empty(4 * dim, dtype=np.complex128)
    cdef double p[4]
    cdef double pa, pb
    with nogil:
        _overlaps(x[0], x[1], d0, &a1[0])
        _overlaps(x[2], x[3], d0, &a2[0])
        _overlaps(x[4], x[5], d1, &b1[0])
        _overlaps(x[6], x[7], d1, &b2[0])
        _kron(&a1[0], d0, &b1[0], d1, &v[0])
        _kron(&a1[0], d0, &b2[0], d1, &v[dim])
        _kron(&a2[0], d0, &b1[0], d1, &v[2 * dim])
        _kron(&a2[0], d0, &b2[0], d1, &v[3 * dim])
        _proj4(rho, &v[0], dim, p)
        pa = _proj(rho_a, &a1[0], d0)
        pb = _proj(rho_b, &b1[0], d1)
    return p[0] + p[1] + p[2] - p[3] - pa - pb
