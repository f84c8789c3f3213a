"""Pure numpy implementations of the hot kernels.

Same signatures and summation order as the compiled ``_kernels`` module.
"""
import numpy as np


def correlate_rows(f, lags, step):
    """Periodic correlation ``out[j, k] = step * sum_i f[i] * lags[j, (i - k) mod N]``.

    The sum over ``i`` runs in increasing order with plain accumulation.
    """
    f = np.ascontiguousarray(f, dtype=np.complex128)
    lags = np.ascontiguousarray(lags, dtype=np.complex128)
    n = f.size
    if lags.ndim != 2 or lags.shape[1] != n:
        raise ValueError("lags must have shape (J, N)")
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n  # [k, i] -> (i - k) mod N
    out = np.empty(lags.shape, dtype=np.complex128)
    for j in range(lags.shape[0]):
        mat = lags[j][idx]
        acc = np.zeros(n, dtype=np.complex128)
        for i in range(n):
            acc += f[i] * mat[:, i]
        out[j] = step * acc
    return out


def compensated_row_sum(rows, coeffs):
    """Kahan-compensated ``sum_j coeffs[j] * rows[j, :]``, rows taken in index order."""
    rows = np.ascontiguousarray(rows, dtype=np.complex128)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    if rows.ndim != 2 or coeffs.shape != (rows.shape[0],):
        raise ValueError("rows must be (J, N) and coeffs (J,)")
    total = np.zeros(rows.shape[1], dtype=np.complex128)
    comp = np.zeros(rows.shape[1], dtype=np.complex128)
    for j in range(rows.shape[0]):
        y = coeffs[j] * rows[j] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def central_diff_rows(rows, step):
    """Periodic second-order central difference along axis 1."""
    rows = np.asarray(rows, dtype=np.complex128)
    return (np.roll(rows, -1, axis=1) - np.roll(rows, 1, axis=1)) / (2.0 * step)
