"""Error metrics, convergence studies and the central-frequency sweep."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .cwt import ScaleGrid, Scalogram, default_scale_grid
from .errors import InputDomainError, StructuralError
from .inversion import ReconstructionConfig, d_db, reconstruct
from .spectral import SampledSignal, analytic_projection, spectral_derivative
from .wavelets import Gaussian, Morlet, admissibility

__all__ = [
    "ErrorReport",
    "SweepTable",
    "TEST_SIGNALS",
    "make_signal",
    "compare",
    "ReconstructionCase",
    "DerivativeCase",
    "convergence_sweep",
    "omega0_sweep",
    "fit_order",
]

DEFAULT_N = 1024
DEFAULT_WINDOW = (-20.0, 20.0)
FLOOR_CHANGE = 0.10


def _gaussian(x):
    return np.exp(-0.5 * x**2)


def _gaussian_derivative(x):
    return x * np.exp(-0.5 * x**2)


def _modulated(x):
    return np.exp(6j * x - 0.5 * x**2)


def _spike_train(x):
    # two narrow pulses, sigma = 0.5
    return np.exp(-2.0 * (x + 4.0) ** 2) + np.exp(-2.0 * (x - 3.0) ** 2)


TEST_SIGNALS = {
    "gaussian": _gaussian,
    "gaussian_derivative": _gaussian_derivative,
    "modulated_gaussian": _modulated,
    "spike_train": _spike_train,
}


def make_signal(name, n=DEFAULT_N, window=DEFAULT_WINDOW):
    """Sample a named test signal on ``n`` points over ``[lo, hi)``.

    ``modulated_gaussian`` is passed through ``analytic_projection`` so it has
    an exactly one-sided discrete spectrum.
    """
    try:
        func = TEST_SIGNALS[name]
    except KeyError:
        raise InputDomainError(f"unknown test signal {name!r}; choose from {sorted(TEST_SIGNALS)}") from None
    sig = SampledSignal.on_window(func, n, *window)
    if name == "modulated_gaussian":
        sig = analytic_projection(sig)
    return sig


@dataclass(frozen=True)
class ErrorReport:
    rel_l2: float
    max_abs: float
    mean_removed: bool = False
    grid: dict = field(default_factory=dict)

    def to_row(self):
        row = {"rel_l2": self.rel_l2, "max_abs": self.max_abs, "mean_removed": self.mean_removed}
        row.update(self.grid)
        return row


def compare(f, f_rec, mean_removed=False, grid=None):
    """Relative L2 error ``||f_rec - f|| / ||f||`` and max abs deviation.

    The denominator is always the reference ``f``, so ``compare`` is not
    symmetric in its arguments.
    """
    if not f.same_grid(f_rec):
        raise StructuralError("compare needs signals on identical grids")
    ref = f.samples
    rec = f_rec.samples
    if mean_removed:
        ref = ref - ref.mean()
        rec = rec - rec.mean()
    denom = np.linalg.norm(ref)
    diff = rec - ref
    rel = float(np.linalg.norm(diff) / denom) if denom > 0 else float(np.linalg.norm(diff))
    return ErrorReport(rel, float(np.max(np.abs(diff))), bool(mean_removed), dict(grid or {}))


@dataclass(frozen=True)
class SweepTable:
    """Ordered sweep rows plus the fitted log-log slope (``None`` if not fitted)."""

    rows: list
    slope: float | None = None
    floor_index: int | None = None

    def to_records(self):
        return [r.to_row() for r in self.rows]

    def summary(self):
        return {
            "n_rows": len(self.rows),
            "observed_order": self.slope,
            "floor_index": self.floor_index,
            "rel_l2": [r.rel_l2 for r in self.rows],
        }


def fit_order(steps, errors):
    """Least-squares slope of ``log(error)`` against ``log(h)`` above the floor.

    The floor starts at the first refinement that improves the error by less
    than ``FLOOR_CHANGE``; points from there on are excluded.
    """
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if steps.size < 2:
        return None, None
    keep = steps.size
    floor = None
    for i in range(1, steps.size):
        if errors[i] > (1.0 - FLOOR_CHANGE) * errors[i - 1]:
            keep, floor = i, i
            break
    if keep < 2:
        return None, floor
    slope = np.polyfit(np.log(steps[:keep]), np.log(errors[:keep]), 1)[0]
    return float(slope), floor


@dataclass(frozen=True)
class ReconstructionCase:
    """End-to-end reconstruction of a named test signal at varying resolution."""

    signal: str = "gaussian_derivative"
    kernel: object = field(default_factory=lambda: Morlet(1.0))
    method: str = "alternative_general"
    window: tuple = DEFAULT_WINDOW

    def run(self, n):
        sig = make_signal(self.signal, n, self.window)
        grid = default_scale_grid(sig, self.kernel)
        rec = reconstruct(sig, self.kernel, grid, ReconstructionConfig(self.method))
        desc = _descriptor(sig, grid, self.kernel, self.method)
        return compare(sig, rec, mean_removed=self.method != "classical", grid=desc), sig.step


@dataclass(frozen=True)
class DerivativeCase:
    """Central-difference derivative of one row against the spectral derivative."""

    signal: str = "gaussian_derivative"
    window: tuple = DEFAULT_WINDOW

    def run(self, n):
        sig = make_signal(self.signal, n, self.window)
        grid = ScaleGrid(np.array([1.0]), np.array([1.0]), "positive_only", 1.0)
        row = Scalogram(sig.samples[None, :], grid, sig.x0, sig.step, 1)
        approx = sig.with_samples(d_db(row).values[0])
        exact = spectral_derivative(sig)
        desc = {"N": n, "h": sig.step, "method": "central2"}
        return compare(exact, approx, grid=desc), sig.step


def _descriptor(sig, grid, kernel, method):
    return {
        "N": sig.n,
        "h": sig.step,
        "a_min": grid.a_min,
        "a_max": grid.a_max,
        "delta": grid.delta,
        "omega0": getattr(kernel, "omega0", 0.0 if kernel.kind == "gaussian" else float("nan")),
        "kernel": kernel.kind,
        "method": method,
    }


def convergence_sweep(test_case, resolutions):
    """Run ``test_case`` at each ``N`` in ``resolutions`` and fit the observed order."""
    resolutions = [int(n) for n in resolutions]
    if not resolutions:
        raise InputDomainError("resolutions must not be empty")
    if any(b <= a for a, b in zip(resolutions[:-1], resolutions[1:])):
        raise InputDomainError("resolutions must be strictly increasing")
    rows, steps = [], []
    for n in resolutions:
        report, h = test_case.run(n)
        rows.append(report)
        steps.append(h)
    slope, floor = fit_order(steps, [r.rel_l2 for r in rows])
    return SweepTable(rows, slope, floor)


def omega0_sweep(signal, omega0_list, grid=None, norm_mode=1):
    """Alternative-route reconstruction error for Morlet kernels over ``omega0_list``.

    ``omega0 = 0`` is the pure Gaussian (diffusion smoothing) kernel. Each row
    also records whether the classical method is applicable; for a Morlet
    kernel it never is.
    """
    omega0_list = [float(w) for w in omega0_list]
    if any(not (0.0 <= w <= 20.0) for w in omega0_list):
        raise InputDomainError("omega0 values must lie in [0, 20]")
    rows = []
    for w0 in omega0_list:
        kernel = Morlet(w0, norm_mode)
        g = grid if grid is not None else default_scale_grid(signal, kernel)
        rec = reconstruct(signal, kernel, g, ReconstructionConfig("alternative_general"))
        report = compare(signal, rec, mean_removed=True, grid=_descriptor(signal, g, kernel, "alternative_general"))
        adm = admissibility(kernel)
        classical = "N/A (non-admissible)" if not adm.admissible else "applicable"
        grid_info = dict(report.grid, classical=classical)
        rows.append(ErrorReport(report.rel_l2, report.max_abs, report.mean_removed, grid_info))
    return SweepTable(rows)


def default_kernel(kind="morlet", omega0=1.0, norm_mode=1):
    if kind == "gaussian":
        return Gaussian(0.5, norm_mode)
    return Morlet(omega0, norm_mode)


def as_plain(value):
    """Convert numpy scalars and dataclasses into JSON-friendly values."""
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return None if math.isnan(v) else v
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {k: as_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [as_plain(v) for v in value]
    if hasattr(value, "__dataclass_fields__"):
        return as_plain(asdict(value))
    return value
