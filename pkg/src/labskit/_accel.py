"""Numba acceleration toggle.

Hot kernels are decorated with :func:`njit`. Setting the environment
variable ``LABSKIT_DISABLE_NUMBA=1`` (before import) swaps in a no-op
decorator so every kernel runs as plain numpy/Python. Both paths must
produce bit-identical results; ``benchmarks/bench_kernels.py`` compares
their speed.
"""

import os

_DISABLE = os.environ.get("LABSKIT_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

NUMBA_ENABLED = False

if not _DISABLE:
    try:
        from numba import njit as _numba_njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if NUMBA_ENABLED:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
