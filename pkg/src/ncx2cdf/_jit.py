"""JIT switch for the scalar kernels.

Kernels are plain Python written in the numba-compatible subset (``math``
only, no objects).  When numba is importable and ``NCX2_DISABLE_NUMBA`` is
unset they are compiled with ``numba.njit``; otherwise the same functions run
interpreted, which is slow but bit-for-bit the reference semantics.

Environment flags (read once at import):

``NCX2_DISABLE_NUMBA=1``
    Force the interpreted fallback path.
``NCX2_NUMBA_CACHE=0``
    Disable numba's on-disk cache (useful while editing kernels, since the
    cache does not track dependencies across modules).
"""

import os

_TRUE = ("1", "true", "yes", "on")


def _flag(name, default):
    return os.environ.get(name, default).strip().lower() in _TRUE


DISABLED_BY_ENV = _flag("NCX2_DISABLE_NUMBA", "0")
CACHE = _flag("NCX2_NUMBA_CACHE", "1")

try:
    if DISABLED_BY_ENV:
        raise ImportError("numba disabled by NCX2_DISABLE_NUMBA")
    import numba
except ImportError:
    numba = None

NUMBA_ENABLED = numba is not None


def backend():
    """Name of the active kernel backend: ``'numba'`` or ``'python'``."""
    return "numba" if NUMBA_ENABLED else "python"


def jit(func):
    """Compile ``func`` with ``numba.njit`` when available, else return it unchanged."""
    if NUMBA_ENABLED:
        return numba.njit(cache=CACHE, nogil=True)(func)
    return func
