"""Selects the compiled kernels when importable, the numpy fallback otherwise.

Set ``CWTINV_BACKEND=python`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("CWTINV_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

correlate_rows = kernels.correlate_rows
compensated_row_sum = kernels.compensated_row_sum
central_diff_rows = kernels.central_diff_rows
