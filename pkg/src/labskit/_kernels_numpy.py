"""Vectorized numpy fallback for the hot kernels.

Selected when ``LABSKIT_DISABLE_NUMBA=1``. Each function matches its
``_kernels_numba`` counterpart bit-for-bit on integer outputs and
elementwise float operations; the test suite enforces this.
"""

import numpy as np

_CHUNK_BITS = 16  # exhaustive scans work on 2^16-state chunks


def autocorr(spins):
    n = spins.shape[0]
    s = spins.astype(np.int64)
    return np.array([int(np.dot(s[: n - k], s[k:])) for k in range(1, n)], dtype=np.int64)


def energy_from_c(c):
    return int(np.dot(c, c))


def _delta_all(spins, c):
    """Flip deltas for every position at once; O(n^2)."""
    n = spins.shape[0]
    s = spins.astype(np.int64)
    padded = np.zeros(3 * n, dtype=np.int64)
    padded[n : 2 * n] = s
    delta = np.zeros(n, dtype=np.int64)
    for k in range(1, n):
        left = padded[n - k : 2 * n - k]
        right = padded[n + k : 2 * n + k]
        ck = c[k - 1]
        nck = ck - 2 * s * (left + right)
        delta += nck * nck - ck * ck
    return delta


def flip_delta_peek(spins, c, i):
    n = spins.shape[0]
    s = int(spins[i])
    delta = 0
    for k in range(1, n):
        left = int(spins[i - k]) if i - k >= 0 else 0
        right = int(spins[i + k]) if i + k < n else 0
        if left == 0 and right == 0:
            continue
        ck = int(c[k - 1])
        nck = ck - 2 * s * (left + right)
        delta += nck * nck - ck * ck
    return delta


def apply_flip(spins, c, i):
    n = spins.shape[0]
    s = int(spins[i])
    for k in range(1, n):
        left = int(spins[i - k]) if i - k >= 0 else 0
        right = int(spins[i + k]) if i + k < n else 0
        if left != 0 or right != 0:
            c[k - 1] -= 2 * s * (left + right)
    spins[i] = -s


def _state_spins(indices, n):
    """+1/-1 matrix for basis-state integers; qubit 1 is the MSB."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (indices[:, None] >> shifts[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def _chunk_energies(indices, n):
    s = _state_spins(indices, n).astype(np.int16)
    e = np.zeros(indices.shape[0], dtype=np.int64)
    for k in range(1, n):
        ck = np.sum(s[:, : n - k] * s[:, k:], axis=1, dtype=np.int64)
        e += ck * ck
    return e


def all_energies(n):
    size = 1 << n
    out = np.empty(size, dtype=np.int64)
    step = min(size, 1 << _CHUNK_BITS)
    for start in range(0, size, step):
        idx = np.arange(start, min(start + step, size), dtype=np.int64)
        out[start : start + idx.shape[0]] = _chunk_energies(idx, n)
    return out


def brute_force_scan(n):
    size = 1 << n
    best_e = None
    best_state = -1
    count = 0
    step = min(size, 1 << _CHUNK_BITS)
    for start in range(0, size, step):
        idx = np.arange(start, min(start + step, size), dtype=np.int64)
        e = _chunk_energies(idx, n)
        chunk_min = int(e.min())
        if best_e is None or chunk_min < best_e:
            best_e = chunk_min
            best_state = start + int(np.argmin(e))
            count = int(np.sum(e == chunk_min))
        elif chunk_min == best_e:
            count += int(np.sum(e == chunk_min))
    return best_e, best_state, count


def tabu_search_run(spins, c, e0, tenure_draws, best_spins):
    n = spins.shape[0]
    m_budget = tenure_draws.shape[0]
    tabu = np.zeros(n, dtype=np.int64)
    best_e = int(e0)
    best_spins[:] = spins
    e_cur = int(e0)
    evals = 1
    big = np.iinfo(np.int64).max
    for t in range(1, m_budget + 1):
        deltas = _delta_all(spins, c)
        evals += n
        admissible = (tabu < t) | (e_cur + deltas < best_e)
        if admissible.any():
            masked = np.where(admissible, deltas, big)
            best_i = int(np.argmin(masked))
        else:
            best_i = int(np.argmin(tabu))
        apply_flip(spins, c, best_i)
        e_cur += int(deltas[best_i])
        tabu[best_i] = t + int(tenure_draws[t - 1])
        if e_cur < best_e:
            best_e = e_cur
            best_spins[:] = spins
    return best_e, e_cur, evals


def _chunk_minima_mask(s16, n):
    """Boolean local-minimum mask for a chunk of spin rows (int16)."""
    m = s16.shape[0]
    c = np.zeros((m, n - 1), dtype=np.int64)
    for k in range(1, n):
        c[:, k - 1] = np.sum(s16[:, : n - k] * s16[:, k:], axis=1, dtype=np.int64)
    padded = np.zeros((m, 3 * n), dtype=np.int64)
    padded[:, n : 2 * n] = s16
    is_min = np.ones(m, dtype=bool)
    s64 = s16.astype(np.int64)
    for i in range(n):
        delta = np.zeros(m, dtype=np.int64)
        for k in range(1, n):
            left = padded[:, n + i - k]
            right = padded[:, n + i + k]
            ck = c[:, k - 1]
            nck = ck - 2 * s64[:, i] * (left + right)
            delta += nck * nck - ck * ck
        is_min &= delta >= 0
    return is_min


def labs_minima_count(n):
    size = 1 << n
    step = min(size, 1 << _CHUNK_BITS)
    count = 0
    for start in range(0, size, step):
        idx = np.arange(start, min(start + step, size), dtype=np.int64)
        s16 = _state_spins(idx, n).astype(np.int16)
        count += int(np.sum(_chunk_minima_mask(s16, n)))
    return count


def sk_minima_count(j_mat):
    n = j_mat.shape[0]
    size = 1 << n
    step = min(size, 1 << _CHUNK_BITS)
    count = 0
    for start in range(0, size, step):
        idx = np.arange(start, min(start + step, size), dtype=np.int64)
        s = _state_spins(idx, n).astype(np.float64)
        h = s @ j_mat.T
        delta = -2.0 * s * h
        count += int(np.sum(np.all(delta >= 0.0, axis=1)))
    return count


def apply_one_y_rotation(amps, ymask, zmask, cos_x, sin_x, parity16):
    size = amps.shape[0]
    idx = np.arange(size, dtype=np.int64)
    lo = idx[(idx & ymask) == 0]
    hi = lo | ymask
    x = lo & zmask
    par = (
        parity16[x & 0xFFFF]
        ^ parity16[(x >> 16) & 0xFFFF]
        ^ parity16[(x >> 32) & 0xFFFF]
    )
    sign = 1.0 - 2.0 * par
    a = amps[lo]
    b = amps[hi]
    amps[lo] = cos_x * a - sign * sin_x * b
    amps[hi] = sign * sin_x * a + cos_x * b
