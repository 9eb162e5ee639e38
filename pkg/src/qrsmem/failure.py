"""Closed-form failure bounds for one outer-code block over one round.

Time-like failure is split into three leading cases: a lone data error
deposited by a failed cat consumption (case 1), a mixed data-plus-readout
error (case 2), and M+1 coordinated measurement errors (case 3).  Cases 1
and 2 are controlled by the kernel-vector counts D_k of the time-like check
matrix; case 3 by the cat error probability raised to M+1.  All bounds are
expectations over the protocol's mixing parameters (random per-coordinate
qudit-to-qubit bases and random column scalings of the extra checks), so a
concrete parameter choice achieving them always exists.

Space-like failure composes the weight-e error probabilities (static,
adaptive-Z and adaptive-X noise sources with ordered-Bell retry counting)
with the uncorrectable fractions per code distance, plus the burst term
for high-weight cat escapes.  The total doubles everything for the two
Pauli sectors and normalises per logical qubit and idle round.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

from .decode import FractionTable, analytic_uncorrectable_fraction, same_weight_collision_bound
from .gf import FieldCtx
from .grs import GrsCode, Matrix, generator_matrix, random_alpha, solve_linear
from .noise import CatModel, DivergentRetry, InstructionRates, PostSelection, outer_round_length


class FailureModelError(ValueError):
    pass


class MissingFractions(FailureModelError):
    pass


class ReductionFailure(FailureModelError):
    pass


# ----------------------------------------------------------------------
# Combinatorics
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def ordered_bell(b: int) -> int:
    """Number of ordered set partitions of b elements."""
    if b == 0:
        return 1
    return sum(comb(b, k) * ordered_bell(b - k) for k in range(1, b + 1))


def d_k(k: int, m: int, q: int) -> int:
    """Kernel vectors of the time-like check matrix supported on exactly the
    first k coordinates; zero for k <= m (no m columns are dependent)."""
    if k < 0 or m < 1:
        raise FailureModelError(f"bad arguments k={k}, M={m}")
    if k <= m:
        return 0
    total = 0
    for t in range(k - m):
        term = comb(k, t) * (q ** (k - m - t) - 1)
        total += -term if t % 2 else term
    return total


def d_k_recurrence_check(k: int, m: int, q: int) -> bool:
    """Exact rational check of the descent identity linking D_{k-1} and D_k."""
    if k < 1:
        raise FailureModelError("k must be >= 1")
    lhs = Fraction(d_k(k - 1, m, q), (q - 1) ** (k - 1))
    sign = -1 if (k - m) % 2 else 1
    rhs = (Fraction(d_k(k, m, q), (q - 1) ** k)
           + sign * Fraction(comb(k - 2, m - 1) if k >= 2 and k - 2 >= m - 1 else 0,
                             (q - 1) ** (k - 1)))
    return lhs == rhs


# ----------------------------------------------------------------------
# Time-like failure cases
# ----------------------------------------------------------------------

def tlf_case1(n: int, d: int, m: int, q: int, p_xx: float) -> float:
    """One cat-data error keeping the round self-consistent."""
    if m > d - 2:
        raise FailureModelError("time-like checks require M <= d-2")
    acc = 0.0
    for k in range(m + 1, d - 1):
        acc += d_k(k, m, q) / float((q - 1) ** k)
    return p_xx * n * acc


def tlf_case1_leading(n: int, d: int, m: int, q: int, p_xx: float) -> float:
    return p_xx * n * (d - 2 - m) / float((q - 1) ** m)


def tlf_case2(n: int, d: int, m: int, q: int, p_xx: float) -> float:
    """One mixed (data + readout) error keeping the round self-consistent."""
    if m > d - 2:
        raise FailureModelError("time-like checks require M <= d-2")
    acc = 0.0
    for k in range(m + 1, d):
        acc += d_k(k, m, q) / float((q - 1) ** k)
        if k - 2 >= m - 1:
            acc += comb(k - 2, m - 1) / float((q - 1) ** (k - 1))
    return p_xx * n * acc


def tlf_case2_leading(n: int, d: int, m: int, q: int, p_xx: float) -> float:
    return 2.0 * p_xx * n * (d - 1 - m) / float((q - 1) ** m)


def tlf_case3(d: int, m: int, q: int, p_cat: float) -> float:
    """M+1 measurement errors forming a time-like codeword."""
    if m < 1:
        raise FailureModelError("M must be >= 1")
    if not (0.0 <= p_cat < 1.0):
        raise FailureModelError(f"p_cat={p_cat} outside [0, 1)")
    if m == 1:
        return comb(d, 2) / (q - 1) * p_cat**2
    return (d - 1) / (q - 1) * p_cat ** (m + 1)


# ----------------------------------------------------------------------
# Explicit time-like check matrices (validation path)
# ----------------------------------------------------------------------

def build_time_like_matrix(d: int, m: int, ctx: FieldCtx, nu=None, rng=None) -> Matrix:
    """An M x (d-1) matrix beta such that [beta | I] checks a distance-(M+1)
    code of length d-1+M, with optional column scaling by nu.

    Built by row-reducing a GRS parity matrix; a singular right block is
    resolved by rotating the evaluation points.
    """
    if m > d - 2:
        raise FailureModelError("need M <= d-2")
    length = d - 1 + m
    if length > ctx.q - 1:
        raise FailureModelError("field too small for the time-like code")
    if nu is not None and (len(nu) != d - 1 or any(v == 0 for v in nu)):
        raise FailureModelError("nu must be d-1 nonzero values")
    if rng is not None:
        points = list(random_alpha(ctx, length, rng))
    else:
        g = ctx._exp[1]  # multiplicative generator from the field tables
        points = [ctx.pow_(g, i) for i in range(length)]
    for attempt in range(length):
        h = generator_matrix(GrsCode(length, m, tuple(points), (1,) * length, ctx))
        reduced = _row_reduce_right_block(h, m, d - 1, ctx)
        if reduced is not None:
            beta = [row[: d - 1] for row in reduced]
            if nu is not None:
                beta = [[ctx.mul(x, v) for x, v in zip(row, nu)] for row in beta]
            return beta
        points = points[1:] + points[:1]
    raise ReductionFailure("no evaluation-point rotation made the right block invertible")


def _row_reduce_right_block(h: Matrix, m: int, left: int, ctx: FieldCtx):
    """Reduce so the last m columns form the identity, or None if singular."""
    work = [list(r) for r in h]
    for i in range(m):
        col = left + i
        piv = next((r for r in range(i, m) if work[r][col]), None)
        if piv is None:
            return None
        work[i], work[piv] = work[piv], work[i]
        inv = ctx.inv(work[i][col])
        work[i] = [ctx.mul(inv, x) for x in work[i]]
        for r in range(m):
            if r != i and work[r][col]:
                f = work[r][col]
                work[r] = [x ^ ctx.mul(f, y) for x, y in zip(work[r], work[i])]
    return work


def kernel_count_bruteforce(beta: Matrix, k: int, ctx: FieldCtx) -> int:
    """Exhaustive count of kernel vectors of beta supported on exactly the
    first k coordinates (test oracle for d_k; tiny fields only)."""
    cols = len(beta[0])
    count = 0
    vec = [0] * cols

    def rec(pos):
        nonlocal count
        if pos == k:
            if all(vec[:k]):
                syn = [0] * len(beta)
                for i, row in enumerate(beta):
                    acc = 0
                    for x, y in zip(row, vec):
                        if x and y:
                            acc ^= ctx.mul(x, y)
                    syn[i] = acc
                if all(v == 0 for v in syn):
                    count += 1
            return
        for val in range(ctx.q):
            vec[pos] = val
            rec(pos + 1)
        vec[pos] = 0

    rec(0)
    return count


# ----------------------------------------------------------------------
# Space-like failure
# ----------------------------------------------------------------------

def slf_weight_prob(e: int, n: int, p_static: float, p_z_round: float,
                    p_x_round: float) -> float:
    """Bound on the probability of a weight-e Z error at syndrome time.

    Splits the e error sites between static sources and the two adaptive
    (retried) sources, whose repeat structure is counted by ordered Bell
    numbers.
    """
    if e > n:
        return 0.0
    total = 0.0
    for a in range(e + 1):
        for b in range(e - a + 1):
            c = e - a - b
            ways = comb(e, a) * comb(e - a, b)
            total += (ways * p_static**a
                      * ordered_bell(b) * p_z_round**b
                      * ordered_bell(c) * p_x_round**c)
    return comb(n, e) * total


TAIL_REL_TOL = 1e-3


def weight_tail(w_from: int, n: int, weight_prob: Callable[[int], float]) -> float:
    """Sum of weight probabilities from w_from upward, truncated once a term
    drops below TAIL_REL_TOL of the running total."""
    acc = 0.0
    for e in range(w_from, n + 1):
        term = weight_prob(e)
        acc += term
        if acc > 0 and term < TAIL_REL_TOL * acc:
            break
    return acc


FractionLookup = Callable[[int, int, int], FractionTable | None]


def _tie_mass(n: int, d: int, e: int, q: int, fractions: FractionLookup | None,
              strict: bool) -> float:
    """sum_k k/(k+1) F[e -> k x e]: from a sampled table when available,
    otherwise bounded by the analytic same-weight collision fraction."""
    table = fractions(n, d, e) if fractions is not None else None
    if table is not None:
        return table.failure_mass()
    if strict:
        raise MissingFractions(f"no fraction table for (n={n}, d={d}, e={e})")
    return same_weight_collision_bound(n, d, e, q)


def slf_total(n: int, d: int, q: int, weight_prob: Callable[[int], float],
              fractions: FractionLookup | None = None,
              strict: bool = False) -> float:
    """Space-like failure bound for one self-consistent round, per distance.

    Composition by distance: below-list weights are certain failures
    (tail), same-weight collisions are weighted by the tie-loss mass, and
    collisions with lower-weight errors use the closed forms.
    """
    p = weight_prob
    if d == 3:
        return weight_tail(2, n, p)
    if d == 4:
        return _tie_mass(n, 4, 2, q, fractions, strict) * p(2) + weight_tail(3, n, p)
    if d == 5:
        frac = analytic_uncorrectable_fraction(n, 5, 3, q) \
            + _tie_mass(n, 5, 3, q, fractions, strict)
        return frac * p(3) + weight_tail(4, n, p)
    if d == 6:
        return _tie_mass(n, 6, 3, q, fractions, strict) * p(3) + weight_tail(4, n, p)
    if d == 7:
        frac = analytic_uncorrectable_fraction(n, 7, 4, q) \
            + _tie_mass(n, 7, 4, q, fractions, strict)
        return frac * p(4) + weight_tail(5, n, p)
    if d == 8:
        return (analytic_uncorrectable_fraction(n, 8, 4, q) * p(4)
                + analytic_uncorrectable_fraction(n, 8, 5, q) * p(5)
                + weight_tail(6, n, p))
    if d == 9:
        return (analytic_uncorrectable_fraction(n, 9, 5, q) * p(5)
                + weight_tail(6, n, p))
    raise FailureModelError(f"space-like model covers d in 3..9, got {d}")


# ----------------------------------------------------------------------
# Totals
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FailureBreakdown:
    """Itemised failure bounds for one block over one outer round."""

    tlf1: float
    tlf2: float
    tlf3: float
    slf: float
    cat_burst: float
    total: float
    ler_per_lqr: float
    n_outer_round: float
    p_static: float
    p_cat: float
    tau_cat: float

    def terms(self) -> dict:
        return {
            "tlf_case1": self.tlf1,
            "tlf_case2": self.tlf2,
            "tlf_case3": self.tlf3,
            "space_like": self.slf,
            "cat_burst": self.cat_burst,
            "total": self.total,
            "ler_per_lqr": self.ler_per_lqr,
            "n_outer_round": self.n_outer_round,
            "p_static": self.p_static,
            "p_cat": self.p_cat,
            "tau_cat": self.tau_cat,
        }


def total_failure(n: int, m: int, d: int, big_m: int, rounds: int, q: int,
                  rates: InstructionRates, ps: PostSelection,
                  fractions: FractionLookup | None = None,
                  cat: CatModel | None = None,
                  strict: bool = False) -> FailureBreakdown:
    """Union-bound failure probability of one block over one outer round,
    doubled across the X and Z sectors, and the per-logical-qubit-round
    normalisation."""
    if not (1 <= big_m <= d - 2):
        raise FailureModelError("need 1 <= M <= d-2")
    if m < 3:
        raise FailureModelError("need at least one data row (m >= 3)")
    cat = cat if cat is not None else CatModel.build(n, rounds, rates, ps)
    n_round = outer_round_length(m, d, big_m, cat, rates)  # may raise DivergentRetry
    p_xx = cat.p_zz
    t1 = tlf_case1(n, d, big_m, q, p_xx)
    t2 = tlf_case2(n, d, big_m, q, p_xx)
    t3 = tlf_case3(d, big_m, q, min(cat.p_cat, 1.0 - 1e-15))
    p_static = cat.p_zz + n_round * rates.p_idle + 6.0 * cat.p_zz
    checks = d - 1 + big_m
    p_z_round = checks * (cat.p_zz_c2 + cat.p_zz)
    p_x_round = checks * cat.p_zz

    def weight_prob(e: int) -> float:
        return slf_weight_prob(e, n, p_static, p_z_round, p_x_round)

    slf = slf_total(n, d, q, weight_prob, fractions, strict)
    burst = 2.0 * checks * cat.p_cat_state_failure
    total = 2.0 * (t1 + t2 + t3 + slf + burst)
    logical_qubits_per_block = 11 * (n - 2 * (d - 1))
    ler = total / (logical_qubits_per_block * n_round)
    return FailureBreakdown(t1, t2, t3, slf, burst, total, ler,
                            n_round, p_static, cat.p_cat, cat.tau_cat)
