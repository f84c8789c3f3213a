"""Continuous-normalized discrete Fourier analysis on uniform periodic grids.

Convention: ``F(w) = integral f(x) exp(-i w x) dx``, realized on a grid
``x_k = x0 + k h`` (k = 0..N-1) as ``F_m = h exp(-i w_m x0) DFT_m``.
Angular frequencies are in radians per signal unit, in numpy's unshifted
bin order with the Nyquist bin carried as ``+pi/h``.

The Hilbert transform multiplier is ``-i sgn(w)`` with ``sgn`` taken as 0 at
both the DC and the Nyquist bins.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputDomainError, StructuralError

__all__ = [
    "SampledSignal",
    "Spectrum",
    "angular_frequencies",
    "forward_spectrum",
    "inverse_spectrum",
    "hilbert",
    "analytic_projection",
    "negative_frequency_fraction",
    "spectral_derivative",
]


def _frozen(arr):
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled complex signal on ``x_k = x0 + k*step``.

    Parameters
    ----------
    samples : array_like
        Signal values; stored as an immutable complex128 array.
    x0 : float
        Left endpoint of the grid.
    step : float
        Sample spacing ``h > 0``.
    """

    samples: np.ndarray
    x0: float = 0.0
    step: float = 1.0

    def __post_init__(self):
        samples = _frozen(self.samples)
        if samples.ndim != 1:
            raise StructuralError(f"samples must be one-dimensional, got shape {samples.shape}")
        n = samples.size
        if n < 4 or n % 2:
            raise InputDomainError(f"N must be even and >= 4, got N={n}")
        if not np.all(np.isfinite(samples)):
            raise InputDomainError("samples contain non-finite values")
        step = float(self.step)
        if not np.isfinite(step) or step <= 0:
            raise InputDomainError(f"step must be finite and > 0, got {self.step!r}")
        x0 = float(self.x0)
        if not np.isfinite(x0):
            raise InputDomainError(f"x0 must be finite, got {self.x0!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "x0", x0)

    @classmethod
    def from_function(cls, func, n, x0, step):
        """Sample ``func`` on the grid ``x0 + k*step``."""
        x = x0 + step * np.arange(n)
        return cls(func(x), x0, step)

    @classmethod
    def on_window(cls, func, n, lo, hi):
        """Sample ``func`` on ``n`` points covering the half-open window ``[lo, hi)``."""
        return cls.from_function(func, n, lo, (hi - lo) / n)

    @property
    def n(self):
        return self.samples.size

    @property
    def x(self):
        return self.x0 + self.step * np.arange(self.n)

    @property
    def length(self):
        """Period ``N*h`` of the implied periodic extension."""
        return self.n * self.step

    def same_grid(self, other, rtol=1e-12):
        return (
            self.n == other.n
            and np.isclose(self.step, other.step, rtol=rtol, atol=0.0)
            and np.isclose(self.x0, other.x0, rtol=rtol, atol=rtol * self.step)
        )

    def with_samples(self, samples):
        return SampledSignal(samples, self.x0, self.step)

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, scalar):
        return self.with_samples(self.samples * scalar)

    __rmul__ = __mul__

    def norm(self):
        """Continuous L2 norm approximation ``sqrt(h * sum |f_k|^2)``."""
        return float(np.sqrt(self.step) * np.linalg.norm(self.samples))

    def mean(self):
        return complex(np.mean(self.samples))


def _check_same_grid(a, b):
    if not a.same_grid(b):
        raise StructuralError(
            f"grid mismatch: (N={a.n}, x0={a.x0}, h={a.step}) vs (N={b.n}, x0={b.x0}, h={b.step})"
        )


def angular_frequencies(n, step):
    """Angular frequency of every DFT bin, unshifted order, Nyquist as ``+pi/step``."""
    idx = np.fft.fftfreq(n) * n
    if n % 2 == 0:
        idx[n // 2] = n // 2
    return 2.0 * np.pi * idx / (n * step)


@dataclass(frozen=True)
class Spectrum:
    """Continuous-normalized spectrum of a :class:`SampledSignal`."""

    bins: np.ndarray
    x0: float
    step: float
    omega: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        bins = _frozen(self.bins)
        if bins.ndim != 1:
            raise StructuralError(f"bins must be one-dimensional, got shape {bins.shape}")
        n = bins.size
        if n < 4 or n % 2:
            raise StructuralError(f"bin count must be even and >= 4, got {n}")
        if not (np.isfinite(self.step) and self.step > 0):
            raise StructuralError(f"invalid step {self.step!r}")
        expected = angular_frequencies(n, float(self.step))
        if self.omega is None:
            omega = expected
        else:
            omega = np.asarray(self.omega, dtype=float)
            if omega.shape != (n,) or not np.allclose(omega, expected, rtol=1e-12, atol=0.0):
                raise StructuralError("omega axis inconsistent with (N, step) metadata")
        omega = np.array(omega, copy=True)
        omega.setflags(write=False)
        object.__setattr__(self, "bins", bins)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "x0", float(self.x0))

    @property
    def n(self):
        return self.bins.size

    @property
    def d_omega(self):
        return 2.0 * np.pi / (self.n * self.step)

    def with_bins(self, bins):
        return Spectrum(bins, self.x0, self.step, self.omega)


def forward_spectrum(signal):
    """Approximate ``F(w_m) = integral f(x) exp(-i w_m x) dx`` on every bin."""
    if not isinstance(signal, SampledSignal):
        signal = SampledSignal(signal)
    omega = angular_frequencies(signal.n, signal.step)
    bins = signal.step * np.exp(-1j * omega * signal.x0) * np.fft.fft(signal.samples)
    return Spectrum(bins, signal.x0, signal.step, omega)


def inverse_spectrum(spec):
    """Exact inverse of :func:`forward_spectrum`."""
    raw = spec.bins * np.exp(1j * spec.omega * spec.x0)
    return SampledSignal(np.fft.ifft(raw) / spec.step, spec.x0, spec.step)


def _sgn(omega):
    s = np.sign(omega)
    s[omega.size // 2] = 0.0
    return s


def hilbert(signal):
    """Discrete Hilbert transform via the multiplier ``-i sgn(w)``.

    DC and Nyquist content is annihilated, so ``hilbert(hilbert(f)) == -f``
    only for signals free of both.

    Examples
    --------
    >>> import numpy as np
    >>> s = SampledSignal.on_window(lambda x: np.cos(2 * x), 64, 0.0, 2 * np.pi)
    >>> bool(np.allclose(hilbert(s).samples, np.sin(2 * s.x)))
    True
    """
    spec = forward_spectrum(signal)
    return inverse_spectrum(spec.with_bins(-1j * _sgn(spec.omega) * spec.bins))


def analytic_projection(signal):
    """Zero every strictly negative-frequency bin; DC and Nyquist are kept."""
    spec = forward_spectrum(signal)
    return inverse_spectrum(spec.with_bins(np.where(spec.omega < 0, 0.0, spec.bins)))


def negative_frequency_fraction(signal):
    """Fraction of spectral energy carried by strictly negative frequencies."""
    spec = forward_spectrum(signal)
    power = np.abs(spec.bins) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    return float(power[spec.omega < 0].sum() / total)


def spectral_derivative(signal):
    """Exact derivative of the trigonometric interpolant (Nyquist mode dropped)."""
    spec = forward_spectrum(signal)
    mult = 1j * spec.omega
    mult[spec.n // 2] = 0.0
    return inverse_spectrum(spec.with_bins(mult * spec.bins))
