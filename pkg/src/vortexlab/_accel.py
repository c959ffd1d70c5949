"""Numba on/off switch.

Set ``VORTEXLAB_NO_NUMBA=1`` before import to force the pure-numpy kernel
path (useful on machines without a working numba, and for benchmarking the
fallback).  The selection is made once at import time.
"""

import os

NUMBA_ENABLED = os.environ.get("VORTEXLAB_NO_NUMBA", "0").lower() not in (
    "1",
    "true",
    "yes",
)

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        """No-op replacement for numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


__all__ = ["njit", "NUMBA_ENABLED"]
