"""Kernel dispatch: numba-compiled loops or the pure-numpy fallback.

Set ``LABSKIT_DISABLE_NUMBA=1`` to force the numpy path. Both paths share
the conventions documented in ``_kernels_numba``.
"""

import numpy as np

from ._accel import NUMBA_ENABLED

if NUMBA_ENABLED:
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl

autocorr = _impl.autocorr
energy_from_c = _impl.energy_from_c
flip_delta_peek = _impl.flip_delta_peek
apply_flip = _impl.apply_flip
all_energies = _impl.all_energies
brute_force_scan = _impl.brute_force_scan
tabu_search_run = _impl.tabu_search_run
labs_minima_count = _impl.labs_minima_count
sk_minima_count = _impl.sk_minima_count


def _build_parity16():
    v = np.arange(1 << 16, dtype=np.uint32)
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return (v & 1).astype(np.int64)


PARITY16 = _build_parity16()


def apply_one_y_rotation(amps, ymask, zmask, cos_x, sin_x):
    _impl.apply_one_y_rotation(amps, ymask, zmask, cos_x, sin_x, PARITY16)
