"""Analyzing kernels and admissibility diagnostics.

Three kernel kinds are supported:

* :class:`Morlet` -- ``psi(x) = C exp(i w0 x) exp(-x^2/2)``, any ``w0 >= 0``.
* :class:`Gaussian` -- ``psi(x) = C exp(-c x^2)``, the non-oscillating kernel.
* :class:`Tabulated` -- a kernel known only through samples of its Fourier
  transform, linearly interpolated and zero outside the table.

``C`` is fixed by the norm mode: ``n=1`` makes ``integral |psi| = 1`` and
``n=2`` makes ``integral |psi|^2 = 1``. Frequency-domain forms follow the
``exp(-i w x)`` convention of :mod:`cwtinv.spectral`.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import (
    DivergenceError,
    InputDomainError,
    NumericalError,
    StructuralError,
    UnsupportedOperationError,
)

__all__ = [
    "WaveletKernel",
    "Morlet",
    "Gaussian",
    "Tabulated",
    "AdmissibilityReport",
    "wavelet_time",
    "wavelet_freq",
    "admissibility",
    "cross_admissibility",
    "delta_prime_freq",
    "load_tabulated_csv",
    "kernel_from_spec",
]

# |psi_hat| below this fraction of its peak counts as zero
ZERO_TOL = 1e-12
# exclusion radii for the C_psi divergence probe
EXCLUSION_RADII = (1e-2, 1e-4, 1e-6)
# relative change between successive radii that signals divergence
GROWTH_TOL = 1e-2
# log(1e16): frequency reach is where the spectrum drops below 1e-16 of peak
_LOG_REACH = math.log(1e16)


def _quad_total(func):
    val, _ = integrate.quad(func, -np.inf, np.inf, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


class WaveletKernel:
    """Immutable analyzing kernel with cached ``psi(0)`` and normalization.

    Subclasses provide the unnormalized shapes ``_time_shape`` and
    ``_freq_shape`` plus ``freq_scale`` (the analytic ratio ``C1 / C``).
    """

    kind = "abstract"
    closed_form = True

    def __init__(self, norm_mode=1):
        if norm_mode not in (1, 2):
            raise InputDomainError(f"norm_mode must be 1 or 2, got {norm_mode!r}")
        self._norm_mode = int(norm_mode)
        self._norm_const = self._compute_norm_const()
        self._psi0 = self._compute_psi0()

    @property
    def norm_mode(self):
        return self._norm_mode

    @property
    def norm_const(self):
        """Time-domain normalization factor ``C``."""
        return self._norm_const

    @property
    def freq_const(self):
        """Frequency-domain amplitude ``C1``."""
        return self._norm_const * self.freq_scale

    @property
    def psi0(self):
        return self._psi0

    def _compute_norm_const(self):
        if self._norm_mode == 1:
            mass = _quad_total(lambda x: abs(self._time_shape(x)))
            return 1.0 / mass
        energy = _quad_total(lambda x: abs(self._time_shape(x)) ** 2)
        return 1.0 / math.sqrt(energy)

    def _compute_psi0(self):
        return complex(self.time(0.0))

    def time(self, x):
        return self._norm_const * self._time_shape(x)

    def freq(self, omega):
        return self.freq_const * self._freq_shape(omega)

    def freq_reach(self):
        """Largest ``|w|`` at which ``|psi_hat|`` is still above 1e-16 of its peak."""
        raise NotImplementedError

    def describe(self):
        return {"kind": self.kind, "norm_mode": self._norm_mode}

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.describe().items() if k != "kind")
        return f"{type(self).__name__}({params})"

    def __eq__(self, other):
        return type(self) is type(other) and self.describe() == other.describe()

    def __hash__(self):
        return hash(tuple(sorted((k, repr(v)) for k, v in self.describe().items())))


class Morlet(WaveletKernel):
    """Standard (uncorrected) Morlet wavelet with central frequency ``omega0``."""

    kind = "morlet"

    def __init__(self, omega0=6.0, norm_mode=1):
        omega0 = float(omega0)
        if not np.isfinite(omega0) or omega0 < 0:
            raise InputDomainError(f"omega0 must be >= 0, got {omega0!r}")
        self.omega0 = omega0
        self.freq_scale = math.sqrt(2.0 * math.pi)
        super().__init__(norm_mode)

    def _time_shape(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * self.omega0 * x - 0.5 * x * x)

    def _freq_shape(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.exp(-0.5 * (omega - self.omega0) ** 2).astype(complex)

    def freq_reach(self):
        return self.omega0 + math.sqrt(2.0 * _LOG_REACH)

    def describe(self):
        return {"kind": self.kind, "omega0": self.omega0, "norm_mode": self.norm_mode}


class Gaussian(WaveletKernel):
    """Pure Gaussian kernel ``C exp(-c x^2)``; convolution with it is diffusion smoothing."""

    kind = "gaussian"

    def __init__(self, c=0.5, norm_mode=1):
        c = float(c)
        if not np.isfinite(c) or c <= 0:
            raise InputDomainError(f"c must be > 0, got {c!r}")
        self.c = c
        self.freq_scale = math.sqrt(math.pi / c)
        super().__init__(norm_mode)

    def _time_shape(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-self.c * x * x).astype(complex)

    def _freq_shape(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.exp(-omega * omega / (4.0 * self.c)).astype(complex)

    def freq_reach(self):
        return math.sqrt(4.0 * self.c * _LOG_REACH)

    def describe(self):
        return {"kind": self.kind, "c": self.c, "norm_mode": self.norm_mode}


class Tabulated(WaveletKernel):
    """Kernel given by samples of its Fourier transform.

    Parameters
    ----------
    omega : array_like
        Strictly increasing angular frequencies.
    values : array_like
        Complex ``psi_hat`` samples at ``omega``.
    norm_mode : {1, 2}
    normalize : bool
        Rescale the table so the norm condition of ``norm_mode`` holds.
        With ``False`` the table is used exactly as given.
    """

    kind = "tabulated"
    closed_form = False

    def __init__(self, omega, values, norm_mode=2, normalize=True):
        omega = np.asarray(omega, dtype=float)
        values = np.asarray(values, dtype=complex)
        if omega.ndim != 1 or omega.shape != values.shape or omega.size < 2:
            raise StructuralError("tabulated kernel needs matching 1-D omega/values with >= 2 samples")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(values))):
            raise InputDomainError("tabulated kernel contains non-finite samples")
        if np.any(np.diff(omega) <= 0):
            raise InputDomainError("tabulated omega must be strictly increasing")
        self.omega = omega
        self._raw = values
        self.normalize = bool(normalize)
        self.freq_scale = 1.0
        super().__init__(norm_mode)

    def _freq_shape(self, omega):
        omega = np.asarray(omega, dtype=float)
        re = np.interp(omega, self.omega, self._raw.real, left=0.0, right=0.0)
        im = np.interp(omega, self.omega, self._raw.imag, left=0.0, right=0.0)
        return re + 1j * im

    def _time_samples(self, oversample=8):
        # inverse transform of the interpolated table on a fine uniform grid
        lo, hi = self.omega[0], self.omega[-1]
        dw = np.min(np.diff(self.omega)) / oversample
        span = max(abs(lo), abs(hi))
        n = int(2 ** math.ceil(math.log2(2 * span / dw + 1))) * 4
        w = np.fft.fftfreq(n, d=1.0 / (n * dw))
        spec = self._freq_shape(w)
        psi = np.fft.ifft(spec) * n * dw / (2.0 * math.pi)
        dx = 2.0 * math.pi / (n * dw)
        return psi, dx

    def _compute_norm_const(self):
        if not self.normalize:
            return 1.0
        if self._norm_mode == 2:
            fine = np.linspace(self.omega[0], self.omega[-1], 16 * self.omega.size + 1)
            energy = integrate.trapezoid(np.abs(self._freq_shape(fine)) ** 2, fine) / (2 * math.pi)
            return 1.0 / math.sqrt(energy)
        psi, dx = self._time_samples()
        return 1.0 / (np.sum(np.abs(psi)) * dx)

    def time(self, x):
        raise UnsupportedOperationError("tabulated kernels have no closed-form time evaluation")

    def _compute_psi0(self):
        # trapezoid is exact for a piecewise-linear spectrum
        return complex(integrate.trapezoid(self.freq(self.omega), self.omega) / (2 * math.pi))

    def freq_reach(self):
        return float(max(abs(self.omega[0]), abs(self.omega[-1])))

    def edge_fraction(self):
        """Largest table-edge magnitude relative to the table peak."""
        peak = np.max(np.abs(self._raw))
        if peak == 0:
            return 0.0
        return float(max(abs(self._raw[0]), abs(self._raw[-1])) / peak)

    def describe(self):
        return {
            "kind": self.kind,
            "n_samples": int(self.omega.size),
            "omega_range": [float(self.omega[0]), float(self.omega[-1])],
            "normalize": self.normalize,
            "norm_mode": self.norm_mode,
        }

    def __eq__(self, other):
        return (
            type(other) is Tabulated
            and self.norm_mode == other.norm_mode
            and self.normalize == other.normalize
            and np.array_equal(self.omega, other.omega)
            and np.array_equal(self._raw, other._raw)
        )

    __hash__ = None


def wavelet_time(kernel, x):
    """Evaluate ``psi(x)`` for a closed-form kernel."""
    if not kernel.closed_form:
        raise UnsupportedOperationError(f"{kernel.kind} kernels have no closed-form time evaluation")
    return kernel.time(x)


def wavelet_freq(kernel, omega):
    """Evaluate ``psi_hat(omega)``."""
    return kernel.freq(omega)


def delta_prime_freq(omega):
    """Fourier transform ``i w`` of the derivative of the Dirac delta."""
    return 1j * np.asarray(omega, dtype=float)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of :func:`admissibility`.

    ``c_psi`` is ``inf`` when ``divergent`` is set; ``truncated`` holds the
    integral evaluated with each exclusion radius in ``EXCLUSION_RADII``.
    """

    psi_hat_at_zero: complex
    psi_hat_peak: float
    c_psi: float
    divergent: bool
    verdict: str
    truncated: tuple = field(default=())
    log_growth_rate: float = 0.0

    @property
    def admissible(self):
        return self.verdict == "admissible"

    def to_dict(self):
        return {
            "psi_hat_at_zero": [self.psi_hat_at_zero.real, self.psi_hat_at_zero.imag],
            "psi_hat_peak": self.psi_hat_peak,
            "c_psi": None if math.isinf(self.c_psi) else self.c_psi,
            "divergent": self.divergent,
            "verdict": self.verdict,
            "exclusion_radii": list(EXCLUSION_RADII),
            "truncated_integrals": list(self.truncated),
            "log_growth_rate": self.log_growth_rate,
        }


def _spectral_peak(kernel):
    reach = kernel.freq_reach()
    if isinstance(kernel, Tabulated):
        grid = kernel.omega
    else:
        grid = np.linspace(-reach, reach, 20001)
    return float(np.max(np.abs(kernel.freq(grid))))


def _half_line_log_integral(func, eps, reach, quad_tol):
    """``integral_eps^reach func(w) dw / w`` and its mirror, via ``w = exp(u)``."""
    if reach <= eps:
        return 0.0 + 0.0j, 0.0
    lo, hi = math.log(eps), math.log(reach)

    def part(sign, take):
        with warnings.catch_warnings():
            # roundoff warnings are expected near the tolerance floor
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                lambda u: take(func(sign * math.exp(u))),
                lo,
                hi,
                epsabs=quad_tol,
                epsrel=quad_tol,
                limit=2000,
            )
        return val, err

    total = 0.0 + 0.0j
    errs = 0.0
    for sign in (1.0, -1.0):
        re, e1 = part(sign, lambda z: complex(z).real)
        im, e2 = part(sign, lambda z: complex(z).imag)
        total += complex(re, im)
        errs += e1 + e2
    return total, errs


def admissibility(kernel, quad_tol=1e-10):
    """Estimate ``C_psi = integral |psi_hat(w)|^2 / |w| dw`` and classify the kernel.

    The integral is evaluated with the neighbourhood ``|w| < eps`` excluded for
    each ``eps`` in ``EXCLUSION_RADII``. A nonzero ``psi_hat(0)`` makes the
    integral grow like ``2 |psi_hat(0)|^2 log(1/eps)``; such kernels are
    reported divergent, as are kernels whose truncated values keep moving by
    more than ``GROWTH_TOL``.
    """
    if not quad_tol > 0:
        raise InputDomainError("quad_tol must be > 0")
    psi_hat0 = complex(kernel.freq(0.0))
    peak = _spectral_peak(kernel)
    nonzero_origin = abs(psi_hat0) > ZERO_TOL * peak
    reach = kernel.freq_reach()

    def power(w):
        return abs(complex(kernel.freq(w))) ** 2

    values = []
    for eps in EXCLUSION_RADII:
        val, _ = _half_line_log_integral(power, eps, reach, quad_tol)
        values.append(val.real)
    changes = [
        abs(b - a) / abs(b) if b != 0 else 0.0 for a, b in zip(values[:-1], values[1:])
    ]
    growing = any(c > GROWTH_TOL for c in changes)
    divergent = nonzero_origin or growing
    verdict = "non-admissible" if nonzero_origin else "admissible"
    if growing and not nonzero_origin:
        raise NumericalError(
            "C_psi quadrature failed to stabilize for a kernel vanishing at the origin",
            {"truncated": values, "relative_changes": changes},
        )
    return AdmissibilityReport(
        psi_hat_at_zero=psi_hat0,
        psi_hat_peak=peak,
        c_psi=math.inf if divergent else values[-1],
        divergent=divergent,
        verdict=verdict,
        truncated=tuple(values),
        log_growth_rate=2.0 * abs(psi_hat0) ** 2,
    )


def cross_admissibility(psi, g_freq, quad_tol=1e-12):
    """Quadrature value of ``C_{psi,g} = integral conj(psi_hat) g_hat / |w| dw``.

    ``g_freq`` is a callable returning ``g_hat(w)`` or another kernel. A nonzero
    integrand limit at the origin, or truncated values that fail to settle,
    raise :class:`DivergenceError`.
    """
    if isinstance(g_freq, WaveletKernel):
        g_freq = g_freq.freq
    peak = _spectral_peak(psi)

    def integrand(w):
        return np.conj(complex(psi.freq(w))) * complex(g_freq(w))

    at_origin = abs(integrand(0.0))
    if at_origin > ZERO_TOL * peak * max(1.0, abs(complex(g_freq(1.0)))):
        raise DivergenceError(
            "C_{psi,g} diverges: integrand numerator is nonzero at w=0",
            {"numerator_at_zero": at_origin},
        )
    reach = psi.freq_reach()
    values = [_half_line_log_integral(integrand, eps, reach, quad_tol)[0] for eps in EXCLUSION_RADII]
    scale = max(abs(v) for v in values)
    for a, b in zip(values[:-1], values[1:]):
        if scale > 0 and abs(b - a) > GROWTH_TOL * scale:
            raise DivergenceError("C_{psi,g} truncated values do not settle", {"truncated": values})
    return values[-1]


def load_tabulated_csv(path, norm_mode=2, normalize=True):
    """Read a tabulated kernel from CSV with columns ``omega, re[, im]`` and a header row."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 3:
        raise StructuralError(f"{path}: need a header row and at least two data rows")
    header, body = rows[0], [r for r in rows[1:] if r]
    try:
        [float(v) for v in header]
    except ValueError:
        pass
    else:
        raise StructuralError(f"{path}: header row required")
    ncol = len(body[0])
    if ncol not in (2, 3) or any(len(r) != ncol for r in body):
        raise StructuralError(f"{path}: expected 2 or 3 columns in every row")
    try:
        data = np.array([[float(v) for v in r] for r in body])
    except ValueError as exc:
        raise InputDomainError(f"{path}: non-numeric value ({exc})") from None
    values = data[:, 1] + (1j * data[:, 2] if ncol == 3 else 0.0)
    return Tabulated(data[:, 0], values, norm_mode=norm_mode, normalize=normalize)


def kernel_from_spec(kind, norm_mode=1, omega0=None, c=None, table=None, normalize=True):
    """Build a kernel from flat parameters as used by the CLI."""
    kind = kind.lower()
    if kind == "morlet":
        return Morlet(6.0 if omega0 is None else omega0, norm_mode)
    if kind == "gaussian":
        return Gaussian(0.5 if c is None else c, norm_mode)
    if kind == "tabulated":
        if table is None:
            raise InputDomainError("tabulated kernel requires a table path")
        return load_tabulated_csv(table, norm_mode=norm_mode, normalize=normalize)
    raise InputDomainError(f"unknown kernel kind {kind!r}")
