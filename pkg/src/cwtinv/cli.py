"""Batch command-line front end.

Usage::

    cwtinv COMMAND [--config FILE] [--KEY VALUE ...]

Commands: transform, reconstruct, compare-methods, sweep-omega0,
sweep-convergence, diagnose-kernel.

Settings come from a flat ``key = value`` file (``#`` starts a comment) and
are overridden by command-line flags of the same name (``--omega0 5`` or
``--omega0=5``). Every run writes its outputs plus ``manifest.json`` into
``out``; a failed run writes ``error.json`` instead and leaves no data files.

Configuration keys
------------------
signal          builtin test signal: gaussian, gaussian_derivative,
                modulated_gaussian, spike_train (default gaussian_derivative)
signal_csv      CSV with columns x, re[, im]; replaces ``signal``
n               number of samples, even and >= 4 (default 1024)
x_min, x_max    sampling window [x_min, x_max) (default -20, 20)
kernel          morlet, gaussian or tabulated (default morlet)
omega0          Morlet central frequency, >= 0 (default 6)
c               Gaussian kernel exponent, > 0 (default 0.5)
norm_mode       1 (amplitude) or 2 (energy) (default 1)
kernel_table    CSV with columns omega, re[, im] for a tabulated kernel
kernel_normalize  normalize a tabulated kernel (default true)
a_min, a_max    scale range, a number or ``auto`` (default auto)
delta           octave fraction between scales (default 0.03125)
layout          mirrored or positive_only (default mirrored)
method          alternative_general, alternative_analytic, classical
restore_mean    add the input mean back to alternative reconstructions (default false)
omega0_list     comma-separated central frequencies in [0, 20] (default 0,0.5,1,2,5)
resolutions     comma-separated increasing N values (default 512,1024,2048)
sweep_kind      reconstruction or derivative (default reconstruction)
out             output directory (default cwtinv_out)
formats         comma-separated subset of csv, json, wrec1
                (default wrec1,json for transform, csv,json otherwise)
"""
from __future__ import annotations

import argparse
import contextlib
import dataclasses
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__, _backend
from . import io as cio
from .cwt import cwt_forward, default_scale_grid
from .errors import CwtInvError, DivergenceError
from .experiments import (
    TEST_SIGNALS,
    DerivativeCase,
    ReconstructionCase,
    as_plain,
    compare,
    convergence_sweep,
    make_signal,
    omega0_sweep,
)
from .inversion import METHODS, ReconstructionConfig, reconstruct
from .wavelets import (
    admissibility,
    cross_admissibility,
    delta_prime_freq,
    kernel_from_spec,
)

COMMANDS = (
    "transform",
    "reconstruct",
    "compare-methods",
    "sweep-omega0",
    "sweep-convergence",
    "diagnose-kernel",
)
FORMATS = ("csv", "json", "wrec1")
LOCK_NAME = ".lock"


class ConfigError(CwtInvError, ValueError):
    """One or more configuration problems; ``errors`` lists all of them."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class RunConfig:
    command: str
    signal: str = "gaussian_derivative"
    signal_csv: str | None = None
    n: int = 1024
    x_min: float = -20.0
    x_max: float = 20.0
    kernel: str = "morlet"
    omega0: float = 6.0
    c: float = 0.5
    norm_mode: int = 1
    kernel_table: str | None = None
    kernel_normalize: bool = True
    a_min: float | None = None
    a_max: float | None = None
    delta: float = 1.0 / 32.0
    layout: str = "mirrored"
    method: str = "alternative_general"
    restore_mean: bool = False
    omega0_list: tuple = (0.0, 0.5, 1.0, 2.0, 5.0)
    resolutions: tuple = (512, 1024, 2048)
    sweep_kind: str = "reconstruction"
    out: str = "cwtinv_out"
    formats: tuple = field(default=None)

    def to_dict(self):
        return as_plain(dataclasses.asdict(self))

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_auto(text):
    t = str(text).strip().lower()
    return None if t in ("auto", "", "none") else float(t)


def _parse_list(conv):
    def parse(text):
        return tuple(conv(v) for v in str(text).split(",") if v.strip())

    return parse


def _parse_int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


CONVERTERS = {
    "signal": str,
    "signal_csv": str,
    "n": _parse_int,
    "x_min": float,
    "x_max": float,
    "kernel": lambda s: str(s).lower(),
    "omega0": float,
    "c": float,
    "norm_mode": _parse_int,
    "kernel_table": str,
    "kernel_normalize": _parse_bool,
    "a_min": _parse_auto,
    "a_max": _parse_auto,
    "delta": float,
    "layout": str,
    "method": str,
    "restore_mean": _parse_bool,
    "omega0_list": _parse_list(float),
    "resolutions": _parse_list(_parse_int),
    "sweep_kind": str,
    "out": str,
    "formats": _parse_list(lambda s: s.strip().lower()),
}


def read_config_text(text):
    """Parse flat ``key = value`` lines into a dict of raw strings."""
    raw, errors = {}, []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, value = (p.strip() for p in line.split("=", 1))
        raw[key.replace("-", "_")] = value
    return raw, errors


def _split_flags(tokens):
    raw, errors = {}, []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--"):
            errors.append(f"unexpected argument {tok!r}")
            i += 1
            continue
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        elif i + 1 < len(tokens):
            i += 1
            value = tokens[i]
        else:
            errors.append(f"flag --{key} is missing a value")
            i += 1
            continue
        raw[key.replace("-", "_")] = value
        i += 1
    return raw, errors


def _validate(values, command):
    errors = []
    if command is not None and command not in COMMANDS:
        errors.append(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")

    def check(cond, msg):
        if not cond:
            errors.append(msg)

    if values.get("signal_csv") is None:
        check(values["signal"] in TEST_SIGNALS, f"signal must be one of {sorted(TEST_SIGNALS)}")
    else:
        check(os.path.isfile(values["signal_csv"]), f"signal_csv {values['signal_csv']!r} does not exist")
    check(values["n"] >= 4 and values["n"] % 2 == 0, "n must be even and >= 4")
    check(values["x_max"] > values["x_min"], "x_max must exceed x_min")
    check(values["kernel"] in ("morlet", "gaussian", "tabulated"), "kernel must be morlet, gaussian or tabulated")
    check(values["omega0"] >= 0, "ω0 must be ≥ 0 (omega0)")
    check(values["omega0"] <= 50, "omega0 must be <= 50")
    check(values["c"] > 0, "c must be > 0")
    check(values["norm_mode"] in (1, 2), "norm_mode must be 1 or 2")
    if values["kernel"] == "tabulated":
        table = values.get("kernel_table")
        check(table is not None and os.path.isfile(table), "kernel=tabulated needs an existing kernel_table")
    for key in ("a_min", "a_max"):
        if values[key] is not None:
            check(values[key] > 0, f"{key} must be > 0 or 'auto'")
    if values["a_min"] is not None and values["a_max"] is not None:
        check(values["a_max"] > values["a_min"], "a_max must exceed a_min")
    check(0 < values["delta"] <= 1, "delta must lie in (0, 1]")
    check(values["layout"] in ("mirrored", "positive_only"), "layout must be mirrored or positive_only")
    check(values["method"] in METHODS, f"method must be one of {', '.join(METHODS)}")
    check(len(values["omega0_list"]) > 0, "omega0_list must not be empty")
    check(all(0 <= w <= 20 for w in values["omega0_list"]), "omega0_list values must lie in [0, 20]")
    res = values["resolutions"]
    check(len(res) > 0, "resolutions must not be empty")
    check(all(r >= 4 and r % 2 == 0 for r in res), "resolutions must be even and >= 4")
    check(all(b > a for a, b in zip(res[:-1], res[1:])), "resolutions must be strictly increasing")
    check(values["sweep_kind"] in ("reconstruction", "derivative"), "sweep_kind must be reconstruction or derivative")
    if values["formats"] is not None:
        bad = [f for f in values["formats"] if f not in FORMATS]
        check(not bad, f"unknown formats {bad}; choose from {', '.join(FORMATS)}")
    return errors


def parse_config(argv=None, text=None):
    """Build a validated :class:`RunConfig`.

    ``argv`` is ``[command, --key, value, ...]``; ``--config FILE`` loads a
    key-value file whose entries the remaining flags override. ``text`` may
    supply the file contents directly. All problems are collected and raised
    together as :class:`ConfigError`.
    """
    argv = list(argv or [])
    errors = []
    command = argv.pop(0) if argv and not argv[0].startswith("--") else None
    if command is None:
        errors.append("missing command")
    flags, flag_errors = _split_flags(argv)
    errors += flag_errors
    raw = {}
    config_path = flags.pop("config", None)
    if config_path is not None:
        try:
            with open(config_path) as fh:
                text = fh.read()
        except OSError as exc:
            errors.append(f"cannot read config file {config_path!r}: {exc.strerror}")
    if text is not None:
        file_raw, file_errors = read_config_text(text)
        errors += file_errors
        raw.update(file_raw)
    raw.update(flags)

    values = {f.name: f.default for f in dataclasses.fields(RunConfig) if f.name != "command"}
    for key, text_value in raw.items():
        if key not in CONVERTERS:
            errors.append(f"unknown key {key!r}")
            continue
        try:
            values[key] = CONVERTERS[key](text_value)
        except ValueError as exc:
            errors.append(f"{key}: {exc}")
    # converters leave failed keys at their defaults, so validation still sees every value
    errors += _validate(values, command)
    if errors:
        raise ConfigError(errors)
    if values["formats"] is None:
        values["formats"] = ("wrec1", "json") if command == "transform" else ("csv", "json")
    return RunConfig(command=command, **values)


# -- execution ---------------------------------------------------------------


class _Outputs:
    """Writes files as ``name.partial`` and publishes them only on success."""

    def __init__(self, directory):
        self.directory = directory
        self.pending = []

    def path(self, name):
        final = os.path.join(self.directory, name)
        tmp = final + ".partial"
        self.pending.append((tmp, final))
        return tmp

    def commit(self):
        names = {}
        for tmp, final in self.pending:
            os.replace(tmp, final)
            names[os.path.basename(final)] = cio.sha256_file(final)
        return names

    def discard(self):
        for tmp, _ in self.pending:
            with contextlib.suppress(FileNotFoundError):
                os.remove(tmp)


@contextlib.contextmanager
def _lock(directory):
    path = os.path.join(directory, LOCK_NAME)
    try:
        fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise CwtInvError(f"output directory {directory!r} is locked by another run ({path})") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        yield
    finally:
        os.close(fd)
        os.remove(path)


def _signal(cfg):
    if cfg.signal_csv is not None:
        return cio.read_signal_csv(cfg.signal_csv)
    return make_signal(cfg.signal, cfg.n, (cfg.x_min, cfg.x_max))


def _kernel(cfg, omega0=None):
    return kernel_from_spec(
        cfg.kernel,
        norm_mode=cfg.norm_mode,
        omega0=cfg.omega0 if omega0 is None else omega0,
        c=cfg.c,
        table=cfg.kernel_table,
        normalize=cfg.kernel_normalize,
    )


def _grid(cfg, signal, kernel):
    return default_scale_grid(
        signal,
        kernel,
        delta=cfg.delta,
        mirrored=cfg.layout == "mirrored",
        a_min=cfg.a_min,
        a_max=cfg.a_max,
    )


def _cmd_transform(cfg, out):
    sig = _signal(cfg)
    kernel = _kernel(cfg)
    grid = _grid(cfg, sig, kernel)
    scal = cwt_forward(sig, kernel, grid)
    if "csv" in cfg.formats:
        cio.write_scalogram_csv(out.path("scalogram.csv"), scal)
    if "wrec1" in cfg.formats:
        cio.write_scalogram_binary(out.path("scalogram.wrec1"), scal.values)
    if "json" in cfg.formats:
        cio.write_json(
            out.path("transform.json"),
            as_plain(
                {
                    "kernel": kernel.describe(),
                    "grid": grid.describe(),
                    "signal": {"n": sig.n, "x0": sig.x0, "step": sig.step},
                    "shape": list(scal.values.shape),
                }
            ),
        )


def _reconstruct_one(cfg, sig, kernel, method):
    grid = _grid(cfg, sig, kernel)
    mean = sig.mean() if cfg.restore_mean else None
    rec = reconstruct(sig, kernel, grid, ReconstructionConfig(method, known_mean=mean))
    mean_removed = method != "classical" and not cfg.restore_mean
    desc = {
        "N": sig.n,
        "h": sig.step,
        "a_min": grid.a_min,
        "a_max": grid.a_max,
        "delta": grid.delta,
        "omega0": getattr(kernel, "omega0", None),
        "kernel": kernel.kind,
        "method": method,
    }
    return rec, compare(sig, rec, mean_removed=mean_removed, grid=desc)


def _cmd_reconstruct(cfg, out):
    sig = _signal(cfg)
    kernel = _kernel(cfg)
    rec, report = _reconstruct_one(cfg, sig, kernel, cfg.method)
    if "csv" in cfg.formats:
        cio.write_reconstruction_csv(out.path("reconstruction.csv"), sig, rec)
    if "json" in cfg.formats:
        cio.write_json(out.path("error_report.json"), as_plain(report.to_row()))


def _cmd_compare_methods(cfg, out):
    sig = _signal(cfg)
    kernel = _kernel(cfg)
    rows = []
    for method in METHODS:
        row = {"method": method, "status": "ok", "rel_l2": None, "max_abs": None, "message": ""}
        try:
            _, report = _reconstruct_one(cfg, sig, kernel, method)
        except CwtInvError as exc:
            row["status"] = type(exc).__name__
            row["message"] = str(exc)
        else:
            row["rel_l2"] = report.rel_l2
            row["max_abs"] = report.max_abs
        rows.append(row)
    if "csv" in cfg.formats:
        cio.write_table_csv(out.path("methods.csv"), rows)
    if "json" in cfg.formats:
        cio.write_json(out.path("methods.json"), as_plain({"kernel": kernel.describe(), "rows": rows}))


def _cmd_sweep_omega0(cfg, out):
    sig = _signal(cfg)
    grid = None
    if cfg.a_min is not None or cfg.a_max is not None:
        grid = _grid(cfg, sig, _kernel(cfg, omega0=max(cfg.omega0_list)))
    table = omega0_sweep(sig, cfg.omega0_list, grid, norm_mode=cfg.norm_mode)
    records = as_plain(table.to_records())
    if "csv" in cfg.formats:
        cio.write_table_csv(out.path("sweep_omega0.csv"), records)
    if "json" in cfg.formats:
        cio.write_json(out.path("sweep_omega0.json"), as_plain({"rows": records, **table.summary()}))


def _cmd_sweep_convergence(cfg, out):
    if cfg.sweep_kind == "derivative":
        case = DerivativeCase(cfg.signal, (cfg.x_min, cfg.x_max))
    else:
        case = ReconstructionCase(cfg.signal, _kernel(cfg), cfg.method, (cfg.x_min, cfg.x_max))
    table = convergence_sweep(case, cfg.resolutions)
    records = as_plain(table.to_records())
    if "csv" in cfg.formats:
        cio.write_table_csv(out.path("sweep_convergence.csv"), records)
    if "json" in cfg.formats:
        cio.write_json(out.path("sweep_convergence.json"), as_plain({"rows": records, **table.summary()}))


def _cmd_diagnose_kernel(cfg, out):
    kernel = _kernel(cfg)
    report = admissibility(kernel)
    try:
        cross = cross_admissibility(kernel, delta_prime_freq)
        cross_val = [cross.real, cross.imag]
    except DivergenceError:
        cross_val = None
    payload = {
        "kernel": kernel.describe(),
        "psi0": [kernel.psi0.real, kernel.psi0.imag],
        "norm_const": kernel.norm_const,
        "freq_const": kernel.freq_const,
        "admissibility": report.to_dict(),
        "c_psi_delta_prime": cross_val,
        "classical_applicable": report.admissible,
        "alternative_applicable": abs(kernel.psi0) > 1e-12,
    }
    if "json" in cfg.formats or "csv" in cfg.formats:
        cio.write_json(out.path("admissibility.json"), as_plain(payload))


HANDLERS = {
    "transform": _cmd_transform,
    "reconstruct": _cmd_reconstruct,
    "compare-methods": _cmd_compare_methods,
    "sweep-omega0": _cmd_sweep_omega0,
    "sweep-convergence": _cmd_sweep_convergence,
    "diagnose-kernel": _cmd_diagnose_kernel,
}


def _error_payload(cfg_command, exc):
    payload = {
        "command": cfg_command,
        "error_type": type(exc).__name__,
        "message": str(exc),
    }
    if isinstance(exc, ConfigError):
        payload["errors"] = exc.errors
    diag = getattr(exc, "diagnostics", None)
    if diag:
        payload["diagnostics"] = as_plain(diag)
    return payload


def run(cfg):
    """Execute one command; returns the process exit status."""
    os.makedirs(cfg.out, exist_ok=True)
    out = _Outputs(cfg.out)
    try:
        with _lock(cfg.out):
            try:
                HANDLERS[cfg.command](cfg, out)
                checksums = out.commit()
            except BaseException:
                out.discard()
                raise
            manifest = {
                "command": cfg.command,
                "config": cfg.to_dict(),
                "config_hash": cfg.digest(),
                "tool_version": __version__,
                "backend": _backend.BACKEND,
                "outputs": checksums,
                "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            }
            cio.write_json(os.path.join(cfg.out, "manifest.json"), manifest)
    except CwtInvError as exc:
        payload = _error_payload(cfg.command, exc)
        with contextlib.suppress(OSError):
            cio.write_json(os.path.join(cfg.out, "error.json"), payload)
        print(json.dumps(payload), file=sys.stderr)
        return 1
    with contextlib.suppress(FileNotFoundError):
        os.remove(os.path.join(cfg.out, "error.json"))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cwtinv",
        description="Continuous wavelet transform and admissibility-free reconstruction.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("Configuration keys", 1)[1],
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="flat key = value configuration file")
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0 if argv else 2
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(json.dumps(_error_payload(argv[0], exc)), file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
