# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-vector and FFT kernels.

Same signatures and semantics as ``_fallback``; every routine works in place.
"""
import numpy as np
from libc.math cimport cos, sin, sqrt, M_PI

ctypedef double complex cplx


def apply_1q(cplx[::1] amps, int nq, int target, m):
    cdef Py_ssize_t half = (<Py_ssize_t>1) << (nq - 1)
    cdef int b = nq - 1 - target
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << b
    cdef Py_ssize_t low = stride - 1
    cdef Py_ssize_t i, i0, i1
    cdef cplx m00 = m[0, 0], m01 = m[0, 1], m10 = m[1, 0], m11 = m[1, 1]
    cdef cplx a0, a1
    for i in range(half):
        i0 = ((i >> b) << (b + 1)) | (i & low)
        i1 = i0 | stride
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = m00 * a0 + m01 * a1
        amps[i1] = m10 * a0 + m11 * a1


def apply_c1q(cplx[::1] amps, int nq, int control, int target, m):
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << nq
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << (nq - 1 - control)
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (nq - 1 - target)
    cdef Py_ssize_t i, i1
    cdef cplx m00 = m[0, 0], m01 = m[0, 1], m10 = m[1, 0], m11 = m[1, 1]
    cdef cplx a0, a1
    for i in range(dim):
        if (i & cbit) and not (i & tbit):
            i1 = i | tbit
            a0 = amps[i]
            a1 = amps[i1]
            amps[i] = m00 * a0 + m01 * a1
            amps[i1] = m10 * a0 + m11 * a1


def apply_swap(cplx[::1] amps, int nq, int a, int b):
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << nq
    cdef Py_ssize_t abit = (<Py_ssize_t>1) << (nq - 1 - a)
    cdef Py_ssize_t bbit = (<Py_ssize_t>1) << (nq - 1 - b)
    cdef Py_ssize_t i, j
    cdef cplx tmp
    for i in range(dim):
        if (i & abit) and not (i & bbit):
            j = (i & ~abit) | bbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


def apply_mux(cplx[::1] amps, int nq, int target, cplx[:, :, ::1] mats):
    cdef int b = nq - 1 - target
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << b
    cdef Py_ssize_t low = stride - 1
    cdef Py_ssize_t half = (<Py_ssize_t>1) << (nq - 1)
    cdef Py_ssize_t r, i0, i1
    cdef cplx a0, a1
    for r in range(half):
        i0 = ((r >> b) << (b + 1)) | (r & low)
        i1 = i0 | stride
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = mats[r, 0, 0] * a0 + mats[r, 0, 1] * a1
        amps[i1] = mats[r, 1, 0] * a0 + mats[r, 1, 1] * a1


def fft_rows(cplx[:, ::1] x, bint inverse=False):
    cdef Py_ssize_t nrows = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    if n == 1:
        return
    cdef Py_ssize_t row, i, j, k, m, h, step, bit
    cdef double sign = -1.0 if inverse else 1.0
    cdef double scale = 1.0 / sqrt(<double>n)
    cdef cplx[::1] tw = np.empty(n // 2, dtype=np.complex128)
    cdef cplx e, o, w, tmp
    for k in range(n // 2):
        tw[k] = cos(2.0 * M_PI * k / n) + 1j * sign * sin(2.0 * M_PI * k / n)
    for row in range(nrows):
        j = 0
        for i in range(1, n):
            bit = n >> 1
            while j & bit:
                j ^= bit
                bit >>= 1
            j |= bit
            if i < j:
                tmp = x[row, i]
                x[row, i] = x[row, j]
                x[row, j] = tmp
        m = 2
        while m <= n:
            h = m // 2
            step = n // m
            for i in range(0, n, m):
                for k in range(h):
                    w = tw[k * step]
                    e = x[row, i + k]
                    o = x[row, i + k + h] * w
                    x[row, i + k] = e + o
                    x[row, i + k + h] = e - o
            m *= 2
        for i in range(n):
            x[row, i] = x[row, i] * scale
