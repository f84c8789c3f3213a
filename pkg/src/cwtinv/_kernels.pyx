# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np

cimport cython


def correlate_rows(f, lags, double step):
    cdef const double complex[::1] fv = np.ascontiguousarray(f, dtype=np.complex128)
    lag_arr = np.ascontiguousarray(lags, dtype=np.complex128)
    if lag_arr.ndim != 2 or lag_arr.shape[1] != fv.shape[0]:
        raise ValueError("lags must have shape (J, N)")
    cdef const double complex[:, ::1] lv = lag_arr
    cdef Py_ssize_t n = fv.shape[0]
    cdef Py_ssize_t nj = lv.shape[0]
    out = np.empty((nj, n), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef Py_ssize_t j, k, i, d
    cdef double complex acc
    with nogil:
        for j in range(nj):
            for k in range(n):
                acc = 0
                for i in range(n):
                    d = i - k
                    if d < 0:
                        d = d + n
                    acc = acc + fv[i] * lv[j, d]
                ov[j, k] = step * acc
    return out


def compensated_row_sum(rows, coeffs):
    row_arr = np.ascontiguousarray(rows, dtype=np.complex128)
    coeff_arr = np.ascontiguousarray(coeffs, dtype=np.float64)
    if row_arr.ndim != 2 or coeff_arr.shape[0] != row_arr.shape[0]:
        raise ValueError("rows must be (J, N) and coeffs (J,)")
    cdef const double complex[:, ::1] rv = row_arr
    cdef const double[::1] cv = coeff_arr
    cdef Py_ssize_t nj = rv.shape[0]
    cdef Py_ssize_t n = rv.shape[1]
    total = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] tv = total
    cdef Py_ssize_t j, k
    cdef double complex s, c, y, t
    with nogil:
        for k in range(n):
            s = 0
            c = 0
            for j in range(nj):
                y = cv[j] * rv[j, k] - c
                t = s + y
                c = (t - s) - y
                s = t
            tv[k] = s
    return total


def central_diff_rows(rows, double step):
    row_arr = np.ascontiguousarray(rows, dtype=np.complex128)
    cdef const double complex[:, ::1] rv = row_arr
    cdef Py_ssize_t nj = rv.shape[0]
    cdef Py_ssize_t n = rv.shape[1]
    out = np.empty((nj, n), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double inv = 1.0 / (2.0 * step)
    cdef Py_ssize_t j, k
    with nogil:
        for j in range(nj):
            ov[j, 0] = (rv[j, 1] - rv[j, n - 1]) * inv
            for k in range(1, n - 1):
                ov[j, k] = (rv[j, k + 1] - rv[j, k - 1]) * inv
            ov[j, n - 1] = (rv[j, 0] - rv[j, n - 2]) * inv
    return out
