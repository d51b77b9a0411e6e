"""Loop kernels compiled with numba.

All functions here are decorated with ``njit`` (see ``_accel``). They must
stay behaviorally identical to the vectorized versions in
``_kernels_numpy``; the test suite compares both paths bit-for-bit.

Conventions: spins are int8 arrays of +1/-1, 0-based position j holds
qubit j+1; basis-state integers put qubit 1 in the most significant bit.
"""

import numpy as np

from ._accel import njit


@njit
def autocorr(spins):
    n = spins.shape[0]
    c = np.zeros(n - 1, dtype=np.int64)
    for k in range(1, n):
        acc = 0
        for i in range(n - k):
            acc += spins[i] * spins[i + k]
        c[k - 1] = acc
    return c


@njit
def energy_from_c(c):
    e = 0
    for k in range(c.shape[0]):
        e += c[k] * c[k]
    return e


@njit
def flip_delta_peek(spins, c, i):
    """Energy change from flipping spin i, without mutating anything."""
    n = spins.shape[0]
    s = spins[i]
    delta = 0
    for k in range(1, n):
        left = spins[i - k] if i - k >= 0 else 0
        right = spins[i + k] if i + k < n else 0
        if left == 0 and right == 0:
            continue
        ck = c[k - 1]
        nck = ck - 2 * s * (left + right)
        delta += nck * nck - ck * ck
    return delta


@njit
def apply_flip(spins, c, i):
    """Flip spin i in place, updating the autocorrelation cache."""
    n = spins.shape[0]
    s = spins[i]
    for k in range(1, n):
        left = spins[i - k] if i - k >= 0 else 0
        right = spins[i + k] if i + k < n else 0
        if left != 0 or right != 0:
            c[k - 1] -= 2 * s * (left + right)
    spins[i] = -s


@njit
def all_energies(n):
    """LABS energy of every basis state, indexed by the state integer.

    Gray-code walk: each step flips one spin and updates the energy in
    O(n), so the full table costs O(n * 2^n).
    """
    size = 1 << n
    out = np.empty(size, dtype=np.int64)
    spins = np.ones(n, dtype=np.int8)
    c = autocorr(spins)
    e = energy_from_c(c)
    out[0] = e
    gray = 0
    for m in range(1, size):
        p = 0
        mm = m
        while mm & 1 == 0:
            mm >>= 1
            p += 1
        i = n - 1 - p  # bit p of the index is qubit n-p, spin position n-1-p
        e += flip_delta_peek(spins, c, i)
        apply_flip(spins, c, i)
        gray ^= 1 << p
        out[gray] = e
    return out


@njit
def brute_force_scan(n):
    """Exhaustive minimum via the Gray-code walk.

    Returns (best_energy, best_state_index, optimum_count).
    """
    size = 1 << n
    spins = np.ones(n, dtype=np.int8)
    c = autocorr(spins)
    e = energy_from_c(c)
    best_e = e
    best_state = 0
    count = 1
    gray = 0
    for m in range(1, size):
        p = 0
        mm = m
        while mm & 1 == 0:
            mm >>= 1
            p += 1
        i = n - 1 - p
        e += flip_delta_peek(spins, c, i)
        apply_flip(spins, c, i)
        gray ^= 1 << p
        if e < best_e:
            best_e = e
            best_state = gray
            count = 1
        elif e == best_e:
            count += 1
            if gray < best_state:
                best_state = gray
    return best_e, best_state, count


@njit
def tabu_search_run(spins, c, e0, tenure_draws, best_spins):
    """One tabu-search walk; spins/c are mutated to the final walk state.

    best_spins receives the lowest-energy sequence seen (the start
    counts). Returns (best_energy, final_energy, evaluations); the
    evaluation count is exactly n * M + 1.
    """
    n = spins.shape[0]
    m_budget = tenure_draws.shape[0]
    tabu = np.zeros(n, dtype=np.int64)
    deltas = np.zeros(n, dtype=np.int64)
    best_e = e0
    for j in range(n):
        best_spins[j] = spins[j]
    e_cur = e0
    evals = 1
    for t in range(1, m_budget + 1):
        best_i = -1
        best_de = 0
        for i in range(n):
            de = flip_delta_peek(spins, c, i)
            deltas[i] = de
            evals += 1
            admissible = tabu[i] < t or (e_cur + de < best_e)
            if admissible and (best_i == -1 or de < best_de):
                best_i = i
                best_de = de
        if best_i == -1:
            # every flip tabu and none aspirates: earliest expiry, lowest index
            best_i = 0
            for i in range(1, n):
                if tabu[i] < tabu[best_i]:
                    best_i = i
        apply_flip(spins, c, best_i)
        e_cur += deltas[best_i]
        tabu[best_i] = t + tenure_draws[t - 1]
        if e_cur < best_e:
            best_e = e_cur
            for j in range(n):
                best_spins[j] = spins[j]
    return best_e, e_cur, evals


@njit
def labs_minima_count(n):
    """Count states where no single flip strictly lowers the energy."""
    size = 1 << n
    spins = np.ones(n, dtype=np.int8)
    c = autocorr(spins)
    count = 0
    for m in range(size):
        if m > 0:
            p = 0
            mm = m
            while mm & 1 == 0:
                mm >>= 1
                p += 1
            apply_flip(spins, c, n - 1 - p)
        is_min = True
        for i in range(n):
            if flip_delta_peek(spins, c, i) < 0:
                is_min = False
                break
        if is_min:
            count += 1
    return count


@njit
def sk_minima_count(j_mat):
    """Count single-flip local minima of an SK instance (<= comparison)."""
    n = j_mat.shape[0]
    size = 1 << n
    spins = np.ones(n, dtype=np.int8)
    # local fields h_i = sum_j J_ij s_j; flip delta_i = -2 s_i h_i
    h = np.zeros(n, dtype=np.float64)
    for i in range(n):
        for jj in range(n):
            h[i] += j_mat[i, jj] * spins[jj]
    count = 0
    for m in range(size):
        if m > 0:
            p = 0
            mm = m
            while mm & 1 == 0:
                mm >>= 1
                p += 1
            i = n - 1 - p
            s_old = spins[i]
            spins[i] = -s_old
            for jj in range(n):
                if jj != i:
                    h[jj] -= 2.0 * j_mat[jj, i] * s_old
            h[i] = 0.0
            for jj in range(n):
                h[i] += j_mat[i, jj] * spins[jj]
        is_min = True
        for i in range(n):
            if -2.0 * spins[i] * h[i] < 0.0:
                is_min = False
                break
        if is_min:
            count += 1
    return count


@njit
def apply_one_y_rotation(amps, ymask, zmask, cos_x, sin_x, parity16):
    """In-place exp(-i x P) for a Pauli word with one Y and Z elsewhere.

    Basis indices pair up across the Y bit; the Z part contributes a sign
    from the parity of idx & zmask. The resulting 2x2 block is a real
    rotation, so amplitudes stay real if they start real.
    """
    size = amps.shape[0]
    for idx in range(size):
        if idx & ymask:
            continue
        partner = idx | ymask
        x = idx & zmask
        par = (
            parity16[x & 0xFFFF]
            ^ parity16[(x >> 16) & 0xFFFF]
            ^ parity16[(x >> 32) & 0xFFFF]
        )
        sign = 1.0 - 2.0 * par
        a = amps[idx]
        b = amps[partner]
        amps[idx] = cos_x * a - sign * sin_x * b
        amps[partner] = sign * sin_x * a + cos_x * b
