"""File formats: signal/kernel CSV input, scalogram CSV and WREC1 binary, result tables.

WREC1 binary layout (all little-endian)::

    offset 0   5 bytes   magic b"WREC1"
    offset 5   uint32    number of scales J
    offset 9   uint32    number of translations N
    offset 13  J*N*2     float64 pairs (re, im), row-major by scale

Floats in text outputs use ``repr`` (shortest round-trip form) so identical
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import hashlib
import json
import struct

import numpy as np

from .errors import InputDomainError, StructuralError
from .spectral import SampledSignal

__all__ = [
    "WREC1_MAGIC",
    "read_signal_csv",
    "write_signal_csv",
    "write_reconstruction_csv",
    "write_scalogram_csv",
    "write_scalogram_binary",
    "read_scalogram_binary",
    "write_table_csv",
    "write_json",
    "sha256_file",
]

WREC1_MAGIC = b"WREC1"
_HEADER = struct.Struct("<5sII")
SPACING_RTOL = 1e-9


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def read_signal_csv(path):
    """Load ``x, re[, im]`` columns (header row required) into a :class:`SampledSignal`."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 5:
        raise StructuralError(f"{path}: need a header and at least 4 samples")
    try:
        [float(v) for v in rows[0]]
    except ValueError:
        pass
    else:
        raise StructuralError(f"{path}: header row required")
    ncol = len(rows[1])
    if ncol not in (2, 3) or any(len(r) != ncol for r in rows[1:]):
        raise StructuralError(f"{path}: expected 2 or 3 columns in every row")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise InputDomainError(f"{path}: non-numeric value ({exc})") from None
    x = data[:, 0]
    dx = np.diff(x)
    step = (x[-1] - x[0]) / (x.size - 1)
    if step <= 0 or np.max(np.abs(dx - step)) > SPACING_RTOL * abs(step):
        raise InputDomainError(f"{path}: x is not uniformly spaced within {SPACING_RTOL} relative")
    values = data[:, 1] + (1j * data[:, 2] if ncol == 3 else 0.0)
    return SampledSignal(values, x[0], step)


def write_signal_csv(path, signal):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for x, v in zip(signal.x, signal.samples):
            w.writerow([_fmt(x), _fmt(v.real), _fmt(v.imag)])


def write_reconstruction_csv(path, signal, rec):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re_f", "im_f", "re_rec", "im_rec"])
        for x, v, r in zip(signal.x, signal.samples, rec.samples):
            w.writerow([_fmt(x), _fmt(v.real), _fmt(v.imag), _fmt(r.real), _fmt(r.imag)])


def write_scalogram_csv(path, scal):
    """One row per scale: ``a, weight, re_0, im_0, ...``; a comment line carries the b-grid."""
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# x0={_fmt(scal.x0)},step={_fmt(scal.step)},n={scal.n},"
            f"norm_mode={scal.norm_mode},layout={scal.grid.layout}\n"
        )
        w = csv.writer(fh, lineterminator="\n")
        header = ["a", "weight"]
        for k in range(scal.n):
            header += [f"re_{k}", f"im_{k}"]
        w.writerow(header)
        for a, wt, row in zip(scal.grid.scales, scal.grid.weights, scal.values):
            out = [_fmt(a), _fmt(wt)]
            for v in row:
                out += [_fmt(v.real), _fmt(v.imag)]
            w.writerow(out)


def write_scalogram_binary(path, values):
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim != 2:
        raise StructuralError("scalogram values must be 2-D")
    nj, n = values.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(WREC1_MAGIC, nj, n))
        fh.write(np.ascontiguousarray(values).astype("<c16").tobytes())


def read_scalogram_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise StructuralError(f"{path}: truncated WREC1 header")
        magic, nj, n = _HEADER.unpack(head)
        if magic != WREC1_MAGIC:
            raise StructuralError(f"{path}: bad magic {magic!r}")
        payload = fh.read()
    if len(payload) != nj * n * 16:
        raise StructuralError(f"{path}: payload size {len(payload)} != {nj * n * 16}")
    return np.frombuffer(payload, dtype="<c16").reshape(nj, n).astype(np.complex128)


def write_table_csv(path, records, columns=None):
    """Write dict records as CSV; columns default to first-seen key order."""
    if columns is None:
        columns = []
        for rec in records:
            for key in rec:
                if key not in columns:
                    columns.append(key)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for rec in records:
            w.writerow([_fmt(rec.get(c)) for c in columns])


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def sha256_file(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
