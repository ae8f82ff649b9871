"""Optional numba acceleration with a pure-Python fallback.

Hot simulation kernels are written once as plain functions over numpy
arrays and scalars, then compiled with numba when it is available. Setting
the environment variable ``MCB_NO_NUMBA=1`` skips compilation, so the same
source runs as ordinary Python. Results are bit-identical either way: the
kernels draw randomness exclusively through ``np.random`` (numba reproduces
numpy's legacy bit stream) and use scalar ``math`` functions only.
"""

from __future__ import annotations

import os

__all__ = ["NUMBA_ENABLED", "maybe_njit", "prange", "set_workers", "max_workers"]

_DISABLED = os.environ.get("MCB_NO_NUMBA", "0").strip().lower() not in ("", "0", "false")

if _DISABLED:
    NUMBA_ENABLED = False
    prange = range
else:
    try:
        import warnings

        import numba
        from numba import prange

        # stale TBB installs trigger a harmless layer-selection warning on the
        # first parallel compile; OMP is picked instead
        warnings.filterwarnings(
            "ignore", message=".*TBB.*", category=numba.NumbaWarning
        )
        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False
        prange = range


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, otherwise a no-op decorator.

    Usable bare (``@maybe_njit``) or with options (``@maybe_njit(cache=True)``).
    In fallback mode the function gains a ``py_func`` attribute pointing to
    itself, mirroring numba dispatchers.
    """

    def decorate(func):
        if NUMBA_ENABLED:
            return numba.njit(**kwargs)(func)
        func.py_func = func
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return decorate(args[0])
    return decorate


def max_workers() -> int:
    """Largest usable worker count for parallel simulation loops."""
    if NUMBA_ENABLED:
        # NUMBA_NUM_THREADS honors environment overrides; the launch-time
        # value is the hard cap for set_num_threads
        return int(numba.config.NUMBA_NUM_THREADS)
    return 1


def set_workers(n: int) -> int:
    """Clamp ``n`` to the usable range and apply it; returns the effective value.

    Worker count never changes simulation output (streams are derived per
    replication), only wall-clock time.
    """
    n = max(1, min(int(n), max_workers()))
    if NUMBA_ENABLED:
        numba.set_num_threads(n)
    return n
