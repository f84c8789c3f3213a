"""Signal reconstruction from a scalogram.

Two admissibility-free routes and the classical baseline:

* ``alternative_general``: differentiate every scale row in ``b``, integrate
  over all scales ``a`` in R, then undo the Hilbert transform. With the
  ``exp(-i w x)`` convention the scale integral of ``d/db W_1`` equals
  ``-2 pi conj(psi(0)) H f``, so ``f = H(g) / (2 pi conj(psi(0)))``.
* ``alternative_analytic``: for spectra supported on ``w >= 0`` the Hilbert
  step reduces to a factor ``-i`` and ``f = -i g / (2 pi conj(psi(0)))``.
* ``classical``: the double integral over ``da db / a^2`` divided by
  ``C_psi``; only defined for admissible kernels.

For the energy norm the rows carry an extra ``|a|^(1/2)`` which the scale
quadrature removes with ``|a|^(-1/2)``, so both norms share one constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .cwt import cwt_forward, default_scale_grid
from .errors import (
    AdmissibilityError,
    ConfigurationError,
    DegenerateKernelError,
    InputDomainError,
    PreconditionError,
)
from .spectral import (
    SampledSignal,
    forward_spectrum,
    hilbert,
    negative_frequency_fraction,
)
from .wavelets import admissibility

__all__ = [
    "METHODS",
    "ReconstructionConfig",
    "d_db",
    "integrate_scales",
    "scale_integral_constant",
    "fubini_scale_integral",
    "reconstruct_alternative",
    "reconstruct_analytic",
    "reconstruct_classical",
    "reconstruct",
    "proof_chain_residual",
]

METHODS = ("alternative_general", "alternative_analytic", "classical")
PSI0_TOL = 1e-12
NEGATIVE_MASS_TOL = 1e-8
SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class ReconstructionConfig:
    """Settings for one reconstruction.

    Parameters
    ----------
    method : str
        One of ``METHODS``.
    derivative_scheme : str
        Only ``"central2"`` (periodic second-order central differences).
    known_mean : complex or None
        Added back to the zero-mean output of the alternative routes.
    symmetry : str or None
        ``"even"`` declares ``W(-a, b) == W(a, b)`` so a ``positive_only``
        grid may stand in for the mirrored one.
    """

    method: str = "alternative_general"
    derivative_scheme: str = "central2"
    known_mean: complex | None = None
    symmetry: str | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputDomainError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.derivative_scheme != "central2":
            raise InputDomainError("only the 'central2' derivative scheme is available")
        if self.symmetry not in (None, "even"):
            raise InputDomainError(f"unknown symmetry {self.symmetry!r}")


def _check_psi0(kernel):
    psi0 = kernel.psi0
    if not abs(psi0) > PSI0_TOL:
        raise DegenerateKernelError(
            f"|psi(0)| = {abs(psi0):.3g} is below {PSI0_TOL}; the alternative formulas divide by it"
        )
    return psi0


def scale_integral_constant(kernel):
    """``2 pi conj(psi(0))``, the factor relating the scale integral to ``-H f``."""
    return 2.0 * math.pi * np.conj(kernel.psi0)


def d_db(scalogram):
    """Periodic second-order central difference of every row in ``b``.

    Wrap-around rows use the first and last samples as neighbours, so the
    result keeps the periodicity of the FFT-based transform.
    """
    if scalogram.n < 4:
        raise InputDomainError("need at least 4 translation samples")
    values = _backend.central_diff_rows(scalogram.values, scalogram.step)
    return scalogram.with_values(values)


def _quadrature_coefficients(grid, norm_mode):
    coeffs = np.array(grid.weights, dtype=float)
    if norm_mode == 2:
        coeffs = coeffs / np.sqrt(np.abs(grid.scales))
    return coeffs


def integrate_scales(dscalogram, symmetry=None):
    """Scale quadrature ``g(b_k) = sum_j w_j c_j D[j, k]``.

    ``c_j`` is 1 for the amplitude norm and ``|a_j|^(-1/2)`` for the energy
    norm. Rows are accumulated in grid order with Kahan compensation, so the
    result is reproducible bit for bit.
    """
    grid = dscalogram.grid
    coeffs = _quadrature_coefficients(grid, dscalogram.norm_mode)
    if grid.layout == "positive_only":
        if symmetry != "even":
            raise ConfigurationError(
                "a positive_only grid covers half of the scale axis; use a mirrored grid "
                "or declare symmetry='even'"
            )
        coeffs = 2.0 * coeffs
    g = _backend.compensated_row_sum(dscalogram.values, coeffs)
    return SampledSignal(g, dscalogram.x0, dscalogram.step)


def fubini_scale_integral(kernel, omega, grid):
    """Quadrature of ``integral conj(psi_hat(a w)) w da`` over the grid.

    The exact value over R is ``2 pi sgn(w) conj(psi(0))``.
    """
    if grid.layout == "positive_only":
        raise ConfigurationError("the identity integrates over all of R; use a mirrored grid")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    vals = np.conj(kernel.freq(np.outer(grid.scales, omega))) * omega[None, :]
    return _backend.compensated_row_sum(vals, grid.weights)


def _resolve(signal, kernel, grid):
    if grid is None:
        grid = default_scale_grid(signal, kernel)
    return grid


def _restore_mean(rec, cfg):
    if cfg is not None and cfg.known_mean is not None:
        rec = rec.with_samples(rec.samples - np.mean(rec.samples) + cfg.known_mean)
    return rec


def _scale_integral(signal, kernel, grid, cfg):
    if grid.layout == "positive_only" and cfg.symmetry != "even":
        raise ConfigurationError(
            "alternative reconstruction integrates over negative scales too; use a mirrored grid"
        )
    if cfg.symmetry == "even":
        _validate_even_symmetry(signal, kernel, grid)
    scal = cwt_forward(signal, kernel, grid)
    return integrate_scales(d_db(scal), symmetry=cfg.symmetry)


def _validate_even_symmetry(signal, kernel, grid):
    probe = grid.positive[:: max(1, grid.positive.size // 8)]
    w = forward_spectrum(signal).omega
    plus = kernel.freq(np.outer(probe, w))
    minus = kernel.freq(np.outer(-probe, w))
    scale = max(np.max(np.abs(plus)), 1e-300)
    if np.max(np.abs(plus - minus)) > SYMMETRY_TOL * scale:
        raise ConfigurationError("symmetry='even' declared but psi_hat(-a w) != psi_hat(a w)")


def reconstruct_alternative(signal, kernel, grid=None, cfg=None):
    """Admissibility-free reconstruction through the Hilbert transform.

    The output is zero-mean unless ``cfg.known_mean`` is given: the Hilbert
    multiplier annihilates the DC bin.
    """
    cfg = cfg or ReconstructionConfig("alternative_general")
    if cfg.method != "alternative_general":
        raise ConfigurationError(f"reconstruct_alternative got method {cfg.method!r}")
    _check_psi0(kernel)
    grid = _resolve(signal, kernel, grid)
    g = _scale_integral(signal, kernel, grid, cfg)
    rec = hilbert(g) * (1.0 / scale_integral_constant(kernel))
    return _restore_mean(rec, cfg)


def reconstruct_analytic(signal, kernel, grid=None, cfg=None):
    """Hilbert-free reconstruction for signals with a one-sided spectrum.

    Raises :class:`PreconditionError` when more than ``NEGATIVE_MASS_TOL`` of the
    spectral energy sits at negative frequencies; ``analytic_projection``
    produces admissible input.
    """
    cfg = cfg or ReconstructionConfig("alternative_analytic")
    if cfg.method != "alternative_analytic":
        raise ConfigurationError(f"reconstruct_analytic got method {cfg.method!r}")
    frac = negative_frequency_fraction(signal)
    if frac > NEGATIVE_MASS_TOL:
        raise PreconditionError(
            f"{frac:.3g} of the spectral energy lies at negative frequencies; "
            "apply spectral.analytic_projection first"
        )
    _check_psi0(kernel)
    grid = _resolve(signal, kernel, grid)
    g = _scale_integral(signal, kernel, grid, cfg)
    rec = g * (-1j / scale_integral_constant(kernel))
    return _restore_mean(rec, cfg)


def reconstruct_classical(signal, kernel, grid=None, report=None):
    """Classical admissible reconstruction with the ``da db / a^2`` measure.

    The translation sum ``h sum_k psi_{2,a,b_k}(x) W(a, b_k)`` is evaluated as a
    periodic convolution through the FFT, which is the trapezoid rule for the
    periodized kernel.
    """
    report = report or admissibility(kernel)
    if not report.admissible:
        raise AdmissibilityError(
            f"{kernel!r} is not admissible (|psi_hat(0)| = {abs(report.psi_hat_at_zero):.3g}, "
            "C_psi diverges); use reconstruct_alternative"
        )
    if kernel.norm_mode != 2:
        raise ConfigurationError("classical reconstruction needs an energy-norm (n=2) kernel")
    grid = _resolve(signal, kernel, grid)
    if grid.layout != "mirrored":
        raise ConfigurationError("classical reconstruction needs a mirrored scale grid")
    scal = cwt_forward(signal, kernel, grid)
    spec = forward_spectrum(signal)
    omega = spec.omega
    phase = np.exp(-1j * omega * signal.x0)
    back = np.exp(1j * omega * signal.x0)
    coeffs = grid.weights / grid.scales**2
    rows = np.empty_like(scal.values)
    for j, a in enumerate(grid.scales):
        row_spec = signal.step * phase * np.fft.fft(scal.values[j])
        synth = np.sqrt(abs(a)) * kernel.freq(a * omega)
        rows[j] = np.fft.ifft(row_spec * synth * back) / signal.step
    total = _backend.compensated_row_sum(rows, coeffs)
    return SampledSignal(total / report.c_psi, signal.x0, signal.step)


def reconstruct(signal, kernel, grid=None, cfg=None):
    """Dispatch on ``cfg.method``."""
    cfg = cfg or ReconstructionConfig()
    if cfg.method == "alternative_general":
        return reconstruct_alternative(signal, kernel, grid, cfg)
    if cfg.method == "alternative_analytic":
        return reconstruct_analytic(signal, kernel, grid, cfg)
    return reconstruct_classical(signal, kernel, grid)


def proof_chain_residual(signal, kernel, grid=None):
    """``||g + 2 pi conj(psi(0)) H f|| / ||2 pi conj(psi(0)) H f||`` with ``g`` the scale integral."""
    grid = _resolve(signal, kernel, grid)
    g = integrate_scales(d_db(cwt_forward(signal, kernel, grid)))
    target = hilbert(signal) * scale_integral_constant(kernel)
    return float(np.linalg.norm(g.samples + target.samples) / np.linalg.norm(target.samples))
