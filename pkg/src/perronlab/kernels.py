"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure Python
module is used. Setting ``PERRONLAB_PURE_PYTHON=1`` forces the fallback.
Both backends are importable directly as ``perronlab._kernels_py`` and
``perronlab._kernels_ext`` for comparison.
"""
import os

from . import _kernels_py

if os.environ.get("PERRONLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_ext as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

strong_components = _impl.strong_components
component_period = _impl.component_period
closed_subsets = _impl.closed_subsets

# naive triple loops beat numpy call overhead only for small matrices
_POWER_SUM_MAX_DIM = 24


def weighted_power_sums(a, coeffs):
    """``out[j] = sum_k coeffs[j, k] a^k`` for a real square matrix ``a``."""
    if a.shape[0] <= _POWER_SUM_MAX_DIM:
        return _impl.weighted_power_sums(a, coeffs)
    return _kernels_py.weighted_power_sums(a, coeffs)


def available_backends():
    """Names and modules of every importable backend."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels_ext
    except ImportError:
        pass
    else:
        backends["cython"] = _kernels_ext
    return backends
