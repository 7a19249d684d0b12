"""Kernel backend selection.

Numba-compiled kernels are used when numba imports cleanly, unless the
environment variable ``RELAYCAP_DISABLE_NUMBA`` is set to a truthy value,
in which case the pure-numpy kernels are used. The choice is made once,
at import time.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLE_ENV = "RELAYCAP_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in _FALSY


try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_requested()
BACKEND = "numba" if USE_NUMBA else "numpy"
