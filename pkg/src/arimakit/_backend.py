"""Kernel backend selection.

The recursive inner loops (CSS residuals, ARMA filtering, Durbin-Levinson)
are compiled with numba when it is importable. Setting ``ARIMAKIT_DISABLE_NUMBA=1``
forces the pure numpy/scipy path, which is also used when numba is missing.
"""
import os
import warnings

ENV_FLAG = "ARIMAKIT_DISABLE_NUMBA"


def _flag_set():
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    _njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _flag_set()

if not HAVE_NUMBA and not _flag_set():  # pragma: no cover
    warnings.warn("numba could not be imported; using the numpy kernels")


def njit(func):
    """Compile ``func`` with numba if available, otherwise return it unchanged."""
    if not HAVE_NUMBA:
        return func
    return _njit(cache=True, nogil=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
