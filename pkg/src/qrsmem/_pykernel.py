"""Pure-Python kernel for support-enumeration decoding and collision sampling.

This is the fallback twin of the compiled extension ``_ckernel``; both
implement the same contract and, given the same seed, produce identical
results (the sampler uses the same SplitMix64 stream in both backends).

Conventions shared by both backends:

* ``h`` is the parity matrix as a list of rows of raw field integers.
* ``exp``/``log`` are the field's discrete-log tables (exp has length
  2*(q-1) so products need no modular reduction).
* A "solution of weight w for syndrome y" is a vector supported exactly on
  a size-w support (all values nonzero) with ``H x = y``.
"""

from __future__ import annotations

BACKEND = "pure"

_MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return state, z


def _solve_support(h, y, support, exp, log, q, collect, limit):
    """All full-support solutions of H|_support x = y.

    Returns a list of value tuples (possibly empty).  Raises OverflowError
    when the solution space is too large to enumerate (q^free > limit).
    """
    r = len(h)
    w = len(support)
    qm1 = q - 1
    aug = [[h[i][j] for j in support] + [y[i]] for i in range(r)]
    piv_cols = []
    rank = 0
    for col in range(w):
        piv = -1
        for i in range(rank, r):
            if aug[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        row = aug[rank]
        inv = exp[qm1 - log[row[col]]]
        linv = log[inv]
        for j in range(col, w + 1):
            if row[j]:
                row[j] = exp[log[row[j]] + linv]
        for i in range(r):
            if i != rank and aug[i][col]:
                f = log[aug[i][col]]
                tgt = aug[i]
                for j in range(col, w + 1):
                    if row[j]:
                        tgt[j] ^= exp[log[row[j]] + f]
        piv_cols.append(col)
        rank += 1
        if rank == r:
            break
    for i in range(rank, r):
        if aug[i][w]:
            return []
    free_cols = [c for c in range(w) if c not in piv_cols]
    nfree = len(free_cols)
    if nfree == 0:
        vals = [0] * w
        for i, c in enumerate(piv_cols):
            vals[c] = aug[i][w]
        if all(vals):
            return [tuple(vals)]
        return []
    if q**nfree > limit:
        raise OverflowError("solution space too large to enumerate")
    sols = []
    assign = [0] * nfree
    while True:
        vals = [0] * w
        for fc, a in zip(free_cols, assign):
            vals[fc] = a
        ok = True
        for i, c in enumerate(piv_cols):
            acc = aug[i][w]
            for fc, a in zip(free_cols, assign):
                hv = aug[i][fc]
                if hv and a:
                    acc ^= exp[log[hv] + log[a]]
            vals[c] = acc
        if all(vals):
            sols.append(tuple(vals))
        k = 0
        while k < nfree:
            assign[k] += 1
            if assign[k] < q:
                break
            assign[k] = 0
            k += 1
        if k == nfree:
            return sols


def weight_solutions(h, y, w, exp, log, q, limit=65536):
    """All (support, values) solutions of weight exactly w."""
    n = len(h[0])
    if w == 0:
        return [((), ())] if all(v == 0 for v in y) else []
    out = []
    idx = list(range(w))
    while True:
        support = tuple(idx)
        for vals in _solve_support(h, y, support, exp, log, q, True, limit):
            out.append((support, vals))
        j = w - 1
        while j >= 0 and idx[j] == n - w + j:
            j -= 1
        if j < 0:
            return out
        idx[j] += 1
        for t in range(j + 1, w):
            idx[t] = idx[t - 1] + 1


def count_weight_solutions(h, y, w, exp, log, q, limit=65536):
    return len(weight_solutions(h, y, w, exp, log, q, limit))


def collision_table(h, e, samples, seed, exp, log, q):
    """Histogram of syndrome-collision counts over sampled weight-e errors.

    For each sample, a uniform weight-e error is drawn (uniform support,
    uniform nonzero values) and the number k of *other* weight-e errors
    with the same syndrome is counted by support enumeration.  Returns a
    dict mapping k to its occurrence count.
    """
    n = len(h[0])
    r = len(h)
    qm1 = q - 1
    state = seed & _MASK
    hist: dict[int, int] = {}
    perm0 = list(range(n))
    for _ in range(samples):
        perm = perm0.copy()
        for i in range(e):
            state, z = splitmix64(state)
            j = i + z % (n - i)
            perm[i], perm[j] = perm[j], perm[i]
        support = perm[:e]
        values = []
        for _i in range(e):
            state, z = splitmix64(state)
            values.append(1 + z % qm1)
        y = [0] * r
        for pos, val in zip(support, values):
            lv = log[val]
            for i in range(r):
                hv = h[i][pos]
                if hv:
                    y[i] ^= exp[log[hv] + lv]
        found = count_weight_solutions(h, y, e, exp, log, q)
        k = found - 1  # the sampled error itself is always found
        hist[k] = hist.get(k, 0) + 1
    return hist
