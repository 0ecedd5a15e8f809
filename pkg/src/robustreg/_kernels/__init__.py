"""Kernel backend selection.

Imports the compiled Cython core when available, otherwise the numpy
fallback. Set ROBUSTREG_PURE=1 to force the fallback (used by tests and
the backend benchmark).
"""

import os

from . import _fallback

ABSOLUTE = _fallback.ABSOLUTE
HUBER = _fallback.HUBER
QUANTILE = _fallback.QUANTILE
SQUARE = _fallback.SQUARE

if os.environ.get("ROBUSTREG_PURE", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

loss_values = _impl.loss_values
loss_subgrads = _impl.loss_subgrads
objective_from_residuals = _impl.objective_from_residuals
residuals = _impl.residuals
subgradient_core = _impl.subgradient_core
top_k_abs_indices = _impl.top_k_abs_indices
