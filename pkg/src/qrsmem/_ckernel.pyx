# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for support-enumeration decoding and collision sampling.

Twin of ``_pykernel``: same contract, same SplitMix64 sample stream, so
results are identical between the two backends for equal seeds.
"""

from libc.stdint cimport uint64_t, int32_t

BACKEND = "ext"

DEF MAX_R = 32
DEF MAX_W = 12

cdef inline uint64_t _mix(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    z = z ^ (z >> 31)
    return z


def splitmix64(state):
    """Python-visible single step, for cross-backend stream tests."""
    cdef uint64_t s = <uint64_t>state
    cdef uint64_t z = _mix(&s)
    return s, z


cdef int _solve_support_c(const int32_t[:, ::1] h, const int32_t* y,
                          const int* support, int w,
                          const int32_t[::1] exp, const int32_t[::1] log,
                          int q, int32_t* out_vals) nogil:
    """Unique-solution fast path: returns 1 and fills out_vals when there is
    exactly one full-support solution, 0 when there is none, -1 when the
    solution space has free variables (caller falls back to Python path)."""
    cdef int32_t aug[MAX_R][MAX_W + 1]
    cdef int piv_cols[MAX_W]
    cdef int r = h.shape[0]
    cdef int i, j, col, piv, rank
    cdef int32_t v, f, linv
    cdef int qm1 = q - 1
    for i in range(r):
        for j in range(w):
            aug[i][j] = h[i, support[j]]
        aug[i][w] = y[i]
    rank = 0
    for col in range(w):
        piv = -1
        for i in range(rank, r):
            if aug[i][col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(w + 1):
                v = aug[rank][j]
                aug[rank][j] = aug[piv][j]
                aug[piv][j] = v
        linv = log[exp[qm1 - log[aug[rank][col]]]]
        for j in range(col, w + 1):
            if aug[rank][j] != 0:
                aug[rank][j] = exp[log[aug[rank][j]] + linv]
        for i in range(r):
            if i != rank and aug[i][col] != 0:
                f = log[aug[i][col]]
                for j in range(col, w + 1):
                    if aug[rank][j] != 0:
                        aug[i][j] = aug[i][j] ^ exp[log[aug[rank][j]] + f]
        piv_cols[rank] = col
        rank += 1
        if rank == r:
            break
    for i in range(rank, r):
        if aug[i][w] != 0:
            return 0
    if rank < w:
        return -1
    for i in range(w):
        v = aug[i][w]
        if v == 0:
            return 0
        out_vals[piv_cols[i]] = v
    return 1


def weight_solutions(h_obj, y_obj, int w, exp_obj, log_obj, int q, long limit=65536):
    """All (support, values) solutions of weight exactly w.

    Free-variable supports (rank-deficient restrictions) are delegated to
    the pure backend so both backends enumerate identical solution sets.
    """
    import numpy as np
    from . import _pykernel

    cdef const int32_t[:, ::1] h = np.ascontiguousarray(h_obj, dtype=np.int32)
    cdef const int32_t[::1] exp = np.ascontiguousarray(exp_obj, dtype=np.int32)
    cdef const int32_t[::1] log = np.ascontiguousarray(log_obj, dtype=np.int32)
    cdef int n = h.shape[1]
    cdef int r = h.shape[0]
    cdef int32_t y[MAX_R]
    cdef int idx[MAX_W]
    cdef int32_t vals[MAX_W]
    cdef int i, j, status
    if w > MAX_W or r > MAX_R:
        raise ValueError("kernel limits exceeded")
    for i in range(r):
        y[i] = y_obj[i]
    if w == 0:
        for i in range(r):
            if y[i] != 0:
                return []
        return [((), ())]
    h_list = [list(row) for row in np.asarray(h_obj)]
    exp_list = list(np.asarray(exp_obj))
    log_list = list(np.asarray(log_obj))
    out = []
    for i in range(w):
        idx[i] = i
    while True:
        status = _solve_support_c(h, y, idx, w, exp, log, q, vals)
        if status == 1:
            out.append((tuple(idx[i] for i in range(w)),
                        tuple(int(vals[i]) for i in range(w))))
        elif status == -1:
            support = tuple(idx[i] for i in range(w))
            for sol in _pykernel._solve_support(h_list, list(y_obj), support,
                                                exp_list, log_list, q, True, limit):
                out.append((support, sol))
        j = w - 1
        while j >= 0 and idx[j] == n - w + j:
            j -= 1
        if j < 0:
            return out
        idx[j] += 1
        for i in range(j + 1, w):
            idx[i] = idx[i - 1] + 1


def collision_table(h_obj, int e, long samples, seed, exp_obj, log_obj, int q):
    """Histogram of syndrome-collision counts over sampled weight-e errors.

    Same stream and counting rule as the pure backend; see there for the
    definition.  Supports must have unique solutions (GRS parity matrices
    with e <= d-1), otherwise the sample is recounted via weight_solutions.
    """
    import numpy as np

    arr = np.ascontiguousarray(h_obj, dtype=np.int32)
    cdef const int32_t[:, ::1] h = arr
    cdef const int32_t[::1] exp = np.ascontiguousarray(exp_obj, dtype=np.int32)
    cdef const int32_t[::1] log = np.ascontiguousarray(log_obj, dtype=np.int32)
    cdef int n = h.shape[1]
    cdef int r = h.shape[0]
    cdef int qm1 = q - 1
    cdef uint64_t state = <uint64_t>(<unsigned long long>seed)
    cdef int perm[4096]
    cdef int support[MAX_W]
    cdef int32_t values[MAX_W]
    cdef int32_t y[MAX_R]
    cdef int idx[MAX_W]
    cdef int32_t vals[MAX_W]
    cdef long found, si
    cdef int i, j, t, pos, status, fallback
    cdef uint64_t z
    cdef int32_t lv
    if e > MAX_W or r > MAX_R or n > 4096:
        raise ValueError("kernel limits exceeded")
    hist = {}
    h_list = None
    for si in range(samples):
        for i in range(n):
            perm[i] = i
        for i in range(e):
            z = _mix(&state)
            j = i + <int>(z % <uint64_t>(n - i))
            t = perm[i]
            perm[i] = perm[j]
            perm[j] = t
        for i in range(e):
            support[i] = perm[i]
        for i in range(e):
            z = _mix(&state)
            values[i] = 1 + <int32_t>(z % <uint64_t>qm1)
        for i in range(r):
            y[i] = 0
        for t in range(e):
            pos = support[t]
            lv = log[values[t]]
            for i in range(r):
                if h[i, pos] != 0:
                    y[i] = y[i] ^ exp[log[h[i, pos]] + lv]
        found = 0
        fallback = 0
        for i in range(e):
            idx[i] = i
        with nogil:
            while True:
                status = _solve_support_c(h, y, idx, e, exp, log, q, vals)
                if status == 1:
                    found += 1
                elif status == -1:
                    fallback = 1
                    break
                j = e - 1
                while j >= 0 and idx[j] == n - e + j:
                    j -= 1
                if j < 0:
                    break
                idx[j] += 1
                for i in range(j + 1, e):
                    idx[i] = idx[i - 1] + 1
        if fallback:
            # rare rank-deficient support: redo the whole count generically
            found = len(weight_solutions(np.asarray(arr), [int(y[i]) for i in range(r)],
                                         e, exp_obj, log_obj, q))
        k = found - 1
        hist[k] = hist.get(k, 0) + 1
    return hist
