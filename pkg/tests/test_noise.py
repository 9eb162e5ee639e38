"""Cost/error model: composite rates, survival, retry timing, round length."""

import random

import pytest

from qrsmem.noise import (NONFT_PAIR_STATS, ZZ_STATS, CatModel, ConfigError,
                          DegenerateP, DivergentRetry, InstructionRates,
                          NoiseError, PostSelection, PsCondition, ReductionTable,
                          cat_error_distribution, cat_time, composite_rate,
                          default_rates, expected_parallel_time, low_noise_rates,
                          morphing_idle_rates, outer_round_length,
                          read_noise_config, survival_probability,
                          write_noise_config)

RATES = default_rates()
NO_PS = PostSelection.none()


def test_default_rates_pinned():
    assert RATES.p_half == 1.7e-7
    assert RATES.p_whole == 1.6e-6
    assert RATES.p_inter == 2.8e-6
    assert RATES.p_idle == pytest.approx(10**-8.8)
    assert RATES.tau_meas == 120 and RATES.tau_idle == 8


def test_presets():
    assert morphing_idle_rates().p_idle == 4.4e-11
    low = low_noise_rates(p_half=1e-8, p_whole=1e-7)
    assert low.p_inter == 1.5e-8


def test_composite_rates():
    assert composite_rate(ZZ_STATS, RATES) == pytest.approx(5.578e-5)
    assert composite_rate(NONFT_PAIR_STATS, RATES) == pytest.approx(1.337e-4, rel=1e-3)
    zero = InstructionRates(0.0, 0.0, 0.0, 0.0)
    assert composite_rate(ZZ_STATS, zero) == 0.0


def test_composite_rate_with_reduction():
    red = ReductionTable({"half": [(0.0, 1.0), (0.01, 0.5)],
                          "whole": [(0.0, 1.0), (0.01, 0.1)],
                          "inter": [(0.0, 1.0), (0.01, 1.0)]})
    ps = PostSelection(PsCondition(0.01, 0.01, 0.01), PsCondition(), PsCondition(), red)
    got = composite_rate(ZZ_STATS, RATES, ps, 1)
    expect = 34 * 1.7e-7 * 0.5 + 12 * 1.6e-6 * 0.1 + 11 * 2.8e-6
    assert got == pytest.approx(expect)
    # interpolation between points
    assert red.multiplier("half", 0.005) == pytest.approx(0.75)
    assert red.multiplier("half", 0.02) == 0.5  # beyond last point: clamp


def test_survival_probability():
    assert survival_probability(NONFT_PAIR_STATS, PsCondition()) == 1.0
    got = survival_probability(NONFT_PAIR_STATS, PsCondition(r_half=0.01))
    assert got == pytest.approx(0.99**73.05)
    assert got == pytest.approx(0.4797, abs=2e-3)
    # monotone decreasing in each rate
    for cls in ("r_half", "r_whole", "r_inter"):
        lo = survival_probability(NONFT_PAIR_STATS, PsCondition(**{cls: 0.001}))
        hi = survival_probability(NONFT_PAIR_STATS, PsCondition(**{cls: 0.01}))
        assert hi < lo < 1.0


def test_expected_parallel_time_degenerate():
    assert expected_parallel_time(5, 1.0) == 1.0
    with pytest.raises(DegenerateP):
        expected_parallel_time(5, 0.0)
    with pytest.raises(DegenerateP):
        expected_parallel_time(5, 1.5)


def test_expected_parallel_time_single_task():
    # closed form 1 + (1-p)/(2p)
    for p in (0.3, 0.5, 0.9):
        assert expected_parallel_time(1, p) == pytest.approx(1 + (1 - p) / (2 * p))
    assert expected_parallel_time(1, 0.5) == pytest.approx(1.5)


def _simulate_parallel(n_tasks, p, trials, rng):
    total = 0.0
    for _ in range(trials):
        worst = 0.0
        for _ in range(n_tasks):
            t = 0.0
            while rng.random() > p:
                t += 0.5
            t += 1.0
            worst = max(worst, t)
        total += worst
    return total / trials


def test_expected_parallel_time_against_simulation(rng):
    n_tasks, p, trials = 3, 0.9, 200_000
    sim = _simulate_parallel(n_tasks, p, trials, rng)
    exact = expected_parallel_time(n_tasks, p)
    # crude 3-sigma band on the simulated mean (max of 3 bounded variables)
    sigma = 0.6 / trials**0.5
    assert abs(sim - exact) < 3 * sigma + 1e-3


def test_cat_time_no_ps_branch():
    tau_layer, tau_nonft, tau_cat = cat_time(40, 1, RATES, NO_PS)
    assert tau_layer == 125 * 120
    assert tau_nonft == tau_layer + 125 * 120
    assert tau_cat == tau_nonft + 2 * (tau_layer + 34 * 120)
    # R = 0: no checking rounds at all
    assert cat_time(40, 0, RATES, NO_PS)[2] == tau_nonft


def test_cat_time_regression_value():
    # frozen from the first evaluation; guards against silent drift
    _, _, tau_cat = cat_time(40, 1, RATES, NO_PS)
    assert tau_cat == pytest.approx(68160.0)


def _simulate_cat_time(n, rounds, p1, p_second, p2, tau_layer_unit, rng, trials):
    """Discrete-event retry simulation mirroring the preparation schedule."""
    total = 0.0
    layer = 125.0
    zz = 34.0
    for _ in range(trials):
        t = 0.0
        while True:
            # first layer: parallel retryable tasks, worst finisher
            worst = 0.0
            for _ in range(n // 2):
                task = 0.0
                while rng.random() > p1:
                    task += layer / 2
                task += layer
                worst = max(worst, task)
            t += worst
            # second layer: one shot; failure restarts the preparation
            if rng.random() > p_second:
                t += layer / 2
                continue
            t += layer
            # verification: 2R offline layers + coupled layers
            ok = True
            for _ in range(2 * rounds):
                worst = 0.0
                for _ in range(n // 2):
                    task = 0.0
                    while rng.random() > p1:
                        task += layer / 2
                    task += layer
                    worst = max(worst, task)
                t += worst
                if rng.random() > p2:
                    t += zz / 2
                    ok = False
                    break
                t += zz
            if ok:
                break
        total += t
    return total / trials * 120


def test_cat_time_matches_event_simulation(rng):
    cond = PsCondition(r_half=0.002, r_whole=0.001, r_inter=0.001)
    ps = PostSelection(cond, PsCondition(r_half=3e-5), cond, ReductionTable())
    n, rounds = 10, 1
    p1 = survival_probability(NONFT_PAIR_STATS, ps.c1)
    p_second = survival_probability(NONFT_PAIR_STATS, ps.c3, scale=n / 2)
    p2 = survival_probability(ZZ_STATS, ps.c2, scale=n)
    _, _, tau_cat = cat_time(n, rounds, RATES, ps)
    sim = _simulate_cat_time(n, rounds, p1, p_second, p2, 125, rng, 30_000)
    assert sim == pytest.approx(tau_cat, rel=0.01)


def test_cat_model_quantities():
    cat = CatModel.build(40, 1, RATES, NO_PS)
    assert cat.p_zz == pytest.approx(5.578e-5)
    assert cat.p_cat_consumption == pytest.approx(40 * 5.578e-5)
    assert cat.p_cat_consumption == pytest.approx(2.2312e-3)
    assert cat.p_cat == pytest.approx(cat.p_cat_creation + cat.p_cat_consumption)
    assert cat.p_ft_pair == pytest.approx(cat.p_pair_c1 + 2 * cat.p_zz_c2)
    assert cat.x_weight_bound(1) == pytest.approx(40 * 5.578e-5)
    dist = cat_error_distribution(40, 1, RATES, NO_PS)
    assert dist["weight_bounds"][1] == pytest.approx(2.2312e-3)
    assert dist["p_cat"] == pytest.approx(cat.p_cat)


def test_cat_failure_shrinks_geometrically():
    p1 = CatModel.build(40, 1, RATES, NO_PS).p_cat_state_failure
    p2 = CatModel.build(40, 2, RATES, NO_PS).p_cat_state_failure
    p3 = CatModel.build(40, 3, RATES, NO_PS).p_cat_state_failure
    ratio = CatModel.build(40, 1, RATES, NO_PS).p_ft_pair
    assert p2 / p1 == pytest.approx(ratio, rel=1e-9)
    assert p3 / p2 == pytest.approx(ratio, rel=1e-9)


def test_zero_rates_zero_model():
    zero = InstructionRates(0.0, 0.0, 0.0, 0.0)
    cat = CatModel.build(30, 1, zero, NO_PS)
    assert cat.p_cat == 0.0 and cat.p_cat_state_failure == 0.0
    n = outer_round_length(10, 5, 1, cat, zero)
    # deterministic schedule: (m-2)/tau_idle * (6 + 2*5 + 2*5*tau_cat/tau_zz) * tau_zz
    tau_zz = 34 * 120
    expect = 8 / 8 * (6 * tau_zz + 10 * tau_zz + 10 * cat.tau_cat)
    assert n == pytest.approx(expect)


def test_outer_round_length_linear_in_rows():
    cat = CatModel.build(40, 1, RATES, NO_PS)
    n10 = outer_round_length(12, 5, 1, cat, RATES)
    n20 = outer_round_length(22, 5, 1, cat, RATES)
    assert n20 / n10 == pytest.approx(2.0)


def test_outer_round_length_regression_and_simulation(rng):
    cat = CatModel.build(40, 1, RATES, NO_PS)
    value = outer_round_length(20, 5, 1, cat, RATES)
    assert value == pytest.approx(1_832_849.94, rel=1e-6)  # frozen
    # retry-count simulation: geometric number of attempted rounds
    checks = 5
    p_reject = checks * cat.p_cat
    trials = 200_000
    tau_zz = 34 * 120
    total = 0.0
    for _ in range(trials):
        t = 6.0 * tau_zz
        while True:
            t += 2 * checks * (tau_zz + cat.tau_cat)
            if rng.random() >= p_reject:
                break
        total += t
    sim = (20 - 2) / 8 * total / trials
    assert sim == pytest.approx(value, rel=0.01)


def test_divergent_retry_guard():
    bad = InstructionRates(5e-4, 5e-3, 8e-3, 1e-9)
    cat = CatModel.build(80, 2, bad, NO_PS)
    assert 9 * cat.p_cat >= 1.0
    with pytest.raises(DivergentRetry):
        outer_round_length(10, 8, 2, cat, bad)


def test_monotone_in_base_rates():
    import dataclasses

    base = CatModel.build(40, 1, RATES, NO_PS)
    for name in ("p_half", "p_whole", "p_inter"):
        bumped = dataclasses.replace(RATES, **{name: getattr(RATES, name) * 2})
        cat = CatModel.build(40, 1, bumped, NO_PS)
        assert cat.p_cat > base.p_cat
        assert cat.p_cat_state_failure > base.p_cat_state_failure


def test_rate_validation():
    with pytest.raises(NoiseError):
        InstructionRates(1.5, 0, 0, 0)
    with pytest.raises(NoiseError):
        PsCondition(r_half=1.0)
    with pytest.raises(NoiseError):
        ReductionTable({"half": [(0.0, 0.0)]})


def test_config_roundtrip_and_errors():
    red = ReductionTable({"half": [(0.0, 1.0), (0.05, 0.2)]})
    ps = PostSelection(PsCondition(0.01, 0.0, 0.002), PsCondition(), PsCondition(), red)
    text = write_noise_config(RATES, ps)
    rates2, ps2 = read_noise_config(text)
    assert rates2 == RATES
    assert ps2.c1 == ps.c1
    assert ps2.reduction.multiplier("half", 0.05) == pytest.approx(0.2)
    with pytest.raises(ConfigError):
        read_noise_config("rate.half 3\n")
    with pytest.raises(ConfigError):
        read_noise_config("unknown.key = 3\n")
    with pytest.raises(ConfigError):
        read_noise_config("reduction.half = nonsense\n")
