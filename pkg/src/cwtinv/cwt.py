"""Forward continuous wavelet transform on periodic grids.

``W_n(a, b) = integral f(x) conj(psi_{n,a,b}(x)) dx`` with
``psi_{1,a,b}(x) = psi((x-b)/a) / |a|`` and ``psi_{2,a,b}(x) = psi((x-b)/a) / |a|^(1/2)``.
The FFT path evaluates each scale row as the inverse spectrum of
``F(w) * |a|^(n-1)/2 * conj(psi_hat(a w))``; the direct path is brute-force
trapezoid quadrature of the defining integral with the signal extended
periodically, kept as an oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import (
    CoverageError,
    InputDomainError,
    SizeError,
    StructuralError,
    UnsupportedOperationError,
)
from .spectral import forward_spectrum
from .wavelets import Tabulated

__all__ = [
    "ScaleGrid",
    "Scalogram",
    "default_scale_grid",
    "cwt_forward",
    "cwt_forward_direct",
    "DIRECT_MAX_N",
    "DEFAULT_DELTA",
    "DEFAULT_AMIN_FACTOR",
]

DEFAULT_DELTA = 1.0 / 32.0
# smallest default scale, in units of the sample step
DEFAULT_AMIN_FACTOR = 1e-4
DIRECT_MAX_N = 4096
# rows per FFT batch, bounds peak memory
_CHUNK = 256


@dataclass(frozen=True)
class ScaleGrid:
    """Scale nodes ``a_j`` with quadrature weights for ``integral ... da``.

    ``layout='mirrored'`` stores the positive branch first, then the negated
    branch in the same order with equal weights.
    """

    scales: np.ndarray
    weights: np.ndarray
    layout: str = "positive_only"
    delta: float = float("nan")

    def __post_init__(self):
        scales = np.array(self.scales, dtype=float, copy=True)
        weights = np.array(self.weights, dtype=float, copy=True)
        if scales.ndim != 1 or scales.shape != weights.shape or scales.size == 0:
            raise StructuralError("scales and weights must be matching non-empty 1-D arrays")
        if not (np.all(np.isfinite(scales)) and np.all(np.isfinite(weights))):
            raise InputDomainError("scale grid contains non-finite values")
        if np.any(scales == 0):
            raise InputDomainError("scale grid must not contain a = 0")
        if np.any(weights <= 0):
            raise InputDomainError("scale weights must be > 0")
        if self.layout == "positive_only":
            pos = scales
            if np.any(pos < 0):
                raise InputDomainError("positive_only grid contains negative scales")
        elif self.layout == "mirrored":
            if scales.size % 2:
                raise StructuralError("mirrored grid must have an even number of scales")
            half = scales.size // 2
            pos, neg = scales[:half], scales[half:]
            if np.any(pos <= 0) or not np.array_equal(neg, -pos):
                raise StructuralError("mirrored grid must list +a_j then -a_j")
            if not np.array_equal(weights[:half], weights[half:]):
                raise StructuralError("mirrored weights must match between branches")
        else:
            raise InputDomainError(f"unknown layout {self.layout!r}")
        if np.any(np.diff(pos) <= 0):
            raise InputDomainError("positive branch must be strictly increasing")
        scales.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "delta", float(self.delta))

    @classmethod
    def log_spaced(cls, a_min, a_max, delta=DEFAULT_DELTA, mirrored=True):
        """``a_j = a_min * 2**(j*delta)`` up to ``a_max``, weights ``a_j * delta * ln 2``."""
        if not (0 < a_min < a_max) or not delta > 0:
            raise InputDomainError("need 0 < a_min < a_max and delta > 0")
        count = int(math.ceil(math.log2(a_max / a_min) / delta - 1e-9)) + 1
        pos = a_min * 2.0 ** (delta * np.arange(count))
        w = pos * delta * math.log(2.0)
        if mirrored:
            return cls(np.concatenate([pos, -pos]), np.concatenate([w, w]), "mirrored", delta)
        return cls(pos, w, "positive_only", delta)

    @property
    def size(self):
        return self.scales.size

    @property
    def positive(self):
        if self.layout == "mirrored":
            return self.scales[: self.size // 2]
        return self.scales

    @property
    def a_min(self):
        return float(self.positive[0])

    @property
    def a_max(self):
        return float(self.positive[-1])

    def describe(self):
        return {
            "a_min": self.a_min,
            "a_max": self.a_max,
            "delta": self.delta,
            "n_scales": int(self.size),
            "layout": self.layout,
        }


def default_scale_grid(signal, kernel, delta=DEFAULT_DELTA, mirrored=True, a_min=None, a_max=None):
    """Log-spaced grid wide enough for reconstruction with a non-admissible kernel.

    ``a_min`` defaults to ``1e-4 * h``: the scale integrand tends to a nonzero
    constant as ``a -> 0`` when ``psi_hat(0) != 0``, so the truncation error is
    linear in ``a_min``. ``a_max`` defaults to the scale at which the kernel's
    spectrum, dilated onto the lowest nonzero bin, has decayed below 1e-16.
    """
    h = signal.step
    w_min = 2.0 * math.pi / (signal.n * h)
    if a_min is None:
        a_min = DEFAULT_AMIN_FACTOR * h
    if a_max is None:
        a_max = kernel.freq_reach() / w_min
    return ScaleGrid.log_spaced(a_min, a_max, delta, mirrored)


@dataclass(frozen=True)
class Scalogram:
    """Transform values ``values[j, k] = W(a_j, b_k)`` with ``b_k`` on the signal grid."""

    values: np.ndarray
    grid: ScaleGrid
    x0: float
    step: float
    norm_mode: int
    kernel: object = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if values.ndim != 2 or values.shape[0] != self.grid.size:
            raise StructuralError(
                f"values shape {values.shape} does not match {self.grid.size} scales"
            )
        if not np.all(np.isfinite(values)):
            raise InputDomainError("scalogram contains non-finite values")
        if self.norm_mode not in (1, 2):
            raise InputDomainError("norm_mode must be 1 or 2")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.values.shape[1]

    @property
    def b(self):
        return self.x0 + self.step * np.arange(self.n)

    def with_values(self, values):
        return Scalogram(values, self.grid, self.x0, self.step, self.norm_mode, self.kernel)


def _check_coverage(kernel, grid, omega):
    if not isinstance(kernel, Tabulated):
        return
    args_hi = np.max(np.abs(grid.scales)) * np.max(np.abs(omega))
    lo, hi = kernel.omega[0], kernel.omega[-1]
    outside = args_hi > hi or -args_hi < lo or lo > 0 or hi < 0
    if outside and kernel.edge_fraction() > 1e-8:
        raise CoverageError(
            f"tabulated kernel covers [{lo}, {hi}] but the grid samples |a w| up to {args_hi:.4g} "
            "and the table has not decayed at its edges"
        )


def _row_factors(grid, norm_mode):
    if norm_mode == 2:
        return np.sqrt(np.abs(grid.scales))
    return np.ones(grid.size)


def cwt_forward(signal, kernel, grid):
    """FFT-path transform: one forward FFT, one inverse FFT per scale.

    Rows inherit circular-convolution semantics from the periodic grid.
    """
    spec = forward_spectrum(signal)
    omega = spec.omega
    _check_coverage(kernel, grid, omega)
    factors = _row_factors(grid, kernel.norm_mode)
    phase = np.exp(1j * omega * signal.x0)
    out = np.empty((grid.size, signal.n), dtype=np.complex128)
    for start in range(0, grid.size, _CHUNK):
        a = grid.scales[start : start + _CHUNK]
        mult = np.conj(kernel.freq(np.outer(a, omega))) * factors[start : start + _CHUNK, None]
        out[start : start + _CHUNK] = np.fft.ifft(spec.bins * phase * mult, axis=1) / signal.step
    return Scalogram(out, grid, signal.x0, signal.step, kernel.norm_mode, kernel)


def _time_support(kernel):
    # |psi(t)| < 1e-16 * |psi(0)| beyond this distance
    envelope_rate = 0.5 if kernel.kind == "morlet" else kernel.c
    return math.sqrt(math.log(1e16) / envelope_rate)


def _periodized_lags(kernel, a, n, step):
    """``sum_p conj(psi((d*h + p*L) / a)) / |a|^e`` for lags ``d = 0..N-1``."""
    length = n * step
    reach = _time_support(kernel) * abs(a)
    p_max = int(math.ceil(reach / length)) + 1
    d = step * np.arange(n)
    acc = np.zeros(n, dtype=np.complex128)
    for p in range(-p_max, p_max + 1):
        acc += np.conj(kernel.time((d + p * length) / a))
    exponent = 1.0 if kernel.norm_mode == 1 else 0.5
    return acc / abs(a) ** exponent


def cwt_forward_direct(signal, kernel, grid, max_n=DIRECT_MAX_N):
    """Brute-force trapezoid quadrature of the defining integral (oracle).

    Only closed-form kernels are supported and ``N`` is capped by ``max_n``.
    """
    if signal.n > max_n:
        raise SizeError(f"direct quadrature limited to N <= {max_n}, got N={signal.n}")
    if kernel.kind not in ("morlet", "gaussian"):
        raise UnsupportedOperationError(f"direct quadrature needs a closed-form kernel, got {kernel.kind}")
    lags = np.stack([_periodized_lags(kernel, a, signal.n, signal.step) for a in grid.scales])
    values = _backend.correlate_rows(signal.samples, lags, signal.step)
    return Scalogram(values, grid, signal.x0, signal.step, kernel.norm_mode, kernel)
