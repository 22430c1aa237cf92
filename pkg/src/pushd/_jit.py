"""JIT selection for the hot kernels.

All array kernels in this package are written as plain functions over numpy
arrays.  By default they are compiled with numba's ``@njit``; setting the
environment variable ``PUSHD_JIT=0`` (or numba being unavailable) keeps them
as interpreted pure-numpy functions with identical semantics.  The fallback
is slow but exercises exactly the same code, which is what the parity tests
and ``benchmarks/bench_jit.py`` rely on.
"""

from __future__ import annotations

import os


def _want_jit() -> bool:
    flag = os.environ.get("PUSHD_JIT", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


JIT_ENABLED = False

if _want_jit():
    try:
        from numba import njit as _njit

        JIT_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if JIT_ENABLED:

    def kernel(func):
        return _njit(cache=True)(func)

else:

    def kernel(func):
        return func


def jit_enabled() -> bool:
    """True when kernels run compiled rather than interpreted."""
    return JIT_ENABLED
