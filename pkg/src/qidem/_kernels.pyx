# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner-loop kernels; same signatures as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"

ctypedef double complex cplx


cdef inline double _abs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


def multiply(x, y, mult):
    cdef const cplx[:] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef const cplx[:] yv = np.ascontiguousarray(y, dtype=np.complex128)
    cdef const cplx[:, :, :] m = np.ascontiguousarray(mult, dtype=np.complex128)
    cdef Py_ssize_t n = m.shape[0], i, j, k
    out = np.zeros(n, dtype=np.complex128)
    cdef cplx[:] o = out
    cdef cplx c
    with nogil:
        for i in range(n):
            if xv[i] == 0:
                continue
            for j in range(n):
                c = xv[i] * yv[j]
                if c == 0:
                    continue
                for k in range(n):
                    o[k] += c * m[i, j, k]
    return out


cdef void _convolve(const cplx[:] a, const cplx[:] b, const cplx[:, :, :] cop,
                    cplx[:] out) noexcept nogil:
    cdef Py_ssize_t n = cop.shape[2], j, k, i
    cdef cplx c
    for i in range(n):
        out[i] = 0
    for j in range(n):
        if a[j] == 0:
            continue
        for k in range(n):
            c = a[j] * b[k]
            if c == 0:
                continue
            for i in range(n):
                out[i] += c * cop[j, k, i]


def convolve(psi1, psi2, cop):
    cdef const cplx[:] a = np.ascontiguousarray(psi1, dtype=np.complex128)
    cdef const cplx[:] b = np.ascontiguousarray(psi2, dtype=np.complex128)
    cdef const cplx[:, :, :] c = np.ascontiguousarray(cop, dtype=np.complex128)
    out = np.empty(c.shape[2], dtype=np.complex128)
    cdef cplx[:] o = out
    with nogil:
        _convolve(a, b, c, o)
    return out


def cesaro(psi, cop, int max_iter, double tol, int check_every=8):
    cdef const cplx[:] s = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const cplx[:, :, :] c = np.ascontiguousarray(cop, dtype=np.complex128)
    cdef Py_ssize_t n = s.shape[0], i
    power_a = np.array(s, dtype=np.complex128)
    power_b = np.empty(n, dtype=np.complex128)
    total_arr = np.array(s, dtype=np.complex128)
    mean_arr = np.array(s, dtype=np.complex128)
    sq_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[:] power = power_a
    cdef cplx[:] nxt = power_b
    cdef cplx[:] total = total_arr
    cdef cplx[:] mean = mean_arr
    cdef cplx[:] sq = sq_arr
    cdef cplx[:] tmp
    cdef double residual = float("inf"), acc
    cdef int it = 1
    with nogil:
        for it in range(1, max_iter + 1):
            if it % check_every == 0 or it == max_iter:
                for i in range(n):
                    mean[i] = total[i] / it
                _convolve(mean, mean, c, sq)
                acc = 0.0
                for i in range(n):
                    acc += _abs2(sq[i] - mean[i])
                residual = sqrt(acc)
                if residual <= tol:
                    break
            _convolve(power, s, c, nxt)
            tmp = power
            power = nxt
            nxt = tmp
            for i in range(n):
                total[i] += power[i]
    return mean_arr, it, residual


def grouplike_system(p, mult, star, V):
    cdef const cplx[:] pv = np.ascontiguousarray(p, dtype=np.complex128)
    cdef const cplx[:, :, :] m = np.ascontiguousarray(mult, dtype=np.complex128)
    cdef const cplx[:, :] st = np.ascontiguousarray(star, dtype=np.complex128)
    cdef const cplx[:, :] v = np.ascontiguousarray(V, dtype=np.complex128)
    cdef Py_ssize_t n = pv.shape[0], nn = n * n, rows = 2 * n + nn
    cdef Py_ssize_t i, j, k, l, a, b, row
    r_arr = np.zeros(rows, dtype=np.complex128)
    A_arr = np.zeros((rows, n), dtype=np.complex128)
    B_arr = np.zeros((rows, n), dtype=np.complex128)
    cdef cplx[:] r = r_arr
    cdef cplx[:, :] A = A_arr
    cdef cplx[:, :] B = B_arr
    cdef cplx acc, pk
    with nogil:
        # block 1: p p - p
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    r[k] += pv[i] * pv[j] * m[i, j, k]
                    # left mult by p on e_j, right mult by p on e_i
                    A[k, j] += pv[i] * m[i, j, k]
                    A[k, i] += pv[j] * m[i, j, k]
        for k in range(n):
            r[k] -= pv[k]
            A[k, k] -= 1
        # block 2: p - p^*
        for k in range(n):
            acc = pv[k]
            for i in range(n):
                acc -= st[k, i] * pv[i].conjugate()
                B[n + k, i] = -st[k, i]
            r[n + k] = acc
            A[n + k, k] = 1
        # block 3: (V - I)(p (x) p)
        for row in range(nn):
            acc = 0
            for a in range(n):
                for b in range(n):
                    acc += v[row, a * n + b] * pv[a] * pv[b]
            a = row // n
            b = row % n
            r[2 * n + row] = acc - pv[a] * pv[b]
            for l in range(n):
                acc = 0
                for k in range(n):
                    pk = pv[k]
                    acc += v[row, l * n + k] * pk + v[row, k * n + l] * pk
                if a == l:
                    acc -= pv[b]
                if b == l:
                    acc -= pv[a]
                A[2 * n + row, l] = acc
    S = A_arr + B_arr
    D = A_arr - B_arr
    J = np.block([[S.real, -D.imag], [S.imag, D.real]])
    return r_arr, J
