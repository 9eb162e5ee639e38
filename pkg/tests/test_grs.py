"""Classical GRS codes: construction, duals, syndromes, weight counts."""

import random

import pytest

from qrsmem.gf import field
from qrsmem.grs import (CodeError, GrsCode, dual, generator_matrix, iter_codewords,
                        matmul, mds_weight_count, min_distance_bruteforce,
                        random_alpha, rank, read_alpha, solve_linear,
                        standard_alpha, syndrome, transpose, write_alpha)

from golden_5qudit import U_5QUDIT


def _random_code(ctx, n, k, rng):
    alpha = random_alpha(ctx, n, rng)
    mult = tuple(rng.randrange(1, ctx.q) for _ in range(n))
    return GrsCode(n, k, alpha, mult, ctx)


def test_generator_rows(f2048):
    alpha = tuple(f2048.pow_(2, i) for i in range(1, 6))
    code = GrsCode(5, 2, alpha, (1,) * 5, f2048)
    gen = generator_matrix(code)
    assert gen[0] == [1, 1, 1, 1, 1]
    assert gen[1] == [2, 4, 8, 16, 32]  # t .. t^5


def test_single_row_all_ones(f16):
    code = GrsCode(6, 1, tuple(range(1, 7)), (1,) * 6, f16)
    assert generator_matrix(code) == [[1] * 6]


def test_generator_rank(f16, rng):
    for _ in range(100):
        n = rng.randrange(4, 13)
        k = rng.randrange(1, n + 1)
        code = _random_code(f16, min(n, 15), min(k, min(n, 15)), rng)
        gen = generator_matrix(code)
        assert rank(gen, f16) == code.k


def test_dual_multipliers_match_printed_example(f2048):
    alpha = tuple(f2048.pow_(2, i) for i in range(1, 6))
    d = dual(GrsCode(5, 3, alpha, (1,) * 5, f2048))
    assert list(d.mult) == U_5QUDIT
    # spot value: t^3 + t^6 + t^7 + t^10
    assert d.mult[0] == 8 + 64 + 128 + 1024 == 1224


def test_dual_orthogonality_and_biduality(f16, rng):
    for _ in range(100):
        n = rng.randrange(3, 10)
        k = rng.randrange(1, n)
        code = _random_code(f16, n, k, rng)
        dc = dual(code)
        prod = matmul(generator_matrix(code), transpose(generator_matrix(dc)), f16)
        assert all(x == 0 for row in prod for x in row)
        again = dual(dc)
        assert again.k == code.k and again.mult == code.mult


def test_syndrome(f2048, rng):
    alpha = standard_alpha(20)
    h = generator_matrix(GrsCode(20, 3, alpha, (1,) * 20, f2048))
    assert syndrome(h, [0] * 20, f2048) == [0, 0, 0]
    lam, j = 77, 9
    e = [0] * 20
    e[j] = lam
    assert syndrome(h, e, f2048) == [f2048.mul(lam, h[r][j]) for r in range(3)]
    e1 = [rng.randrange(2048) for _ in range(20)]
    e2 = [rng.randrange(2048) for _ in range(20)]
    s12 = syndrome(h, [a ^ b for a, b in zip(e1, e2)], f2048)
    assert s12 == [a ^ b for a, b in zip(syndrome(h, e1, f2048), syndrome(h, e2, f2048))]


def test_min_distance_bruteforce(f8, f16, rng):
    code = _random_code(f8, 7, 3, rng)
    assert min_distance_bruteforce(code) == 5
    code16 = _random_code(f16, 8, 5, rng)
    assert min_distance_bruteforce(code16) == 4
    full = _random_code(f8, 5, 5, rng)
    assert min_distance_bruteforce(full) == 1


def test_mds_weight_count_values():
    # distance-8 weight-8 count at n = 20, q = 2048
    assert mds_weight_count(20, 8, 8, 2048) == 2047 * 125970 == 257_860_590
    assert mds_weight_count(20, 8, 5, 2048) == 0
    # printed coefficient structure at d = 8 and d = 9
    from math import comb
    n, q = 30, 2048
    assert mds_weight_count(n, 8, 9, q) == (q - 1) * (q - 8) * comb(n, 9)
    assert mds_weight_count(n, 8, 10, q) == (q - 1) * (q**2 - 9 * q + 36) * comb(n, 10)
    assert mds_weight_count(n, 9, 10, q) == (q - 1) * (q - 9) * comb(n, 10)


def test_mds_weight_count_matches_enumeration(f8, rng):
    code = _random_code(f8, 7, 3, rng)
    counts = {}
    for word in iter_codewords(code):
        w = sum(1 for x in word if x)
        counts[w] = counts.get(w, 0) + 1
    for w in range(8):
        assert counts.get(w, 0) == mds_weight_count(7, 5, w, 8)
    assert sum(counts.values()) == 8**3


def test_mds_weight_sum_is_code_size():
    total = sum(mds_weight_count(9, 4, w, 16) for w in range(10))
    assert total == 16**6


def test_construction_rejects_bad_inputs(f16):
    with pytest.raises(CodeError):
        GrsCode(4, 2, (1, 2, 3, 3), (1, 1, 1, 1), f16)  # repeated alpha
    with pytest.raises(CodeError):
        GrsCode(4, 2, (0, 2, 3, 4), (1, 1, 1, 1), f16)  # zero evaluation point
    with pytest.raises(CodeError):
        GrsCode(4, 2, (1, 2, 3, 4), (1, 0, 1, 1), f16)  # zero multiplier
    with pytest.raises(CodeError):
        GrsCode(4, 0, (1, 2, 3, 4), (1, 1, 1, 1), f16)


def test_alpha_files():
    alpha = standard_alpha(20)
    assert len(alpha) == 20
    assert alpha[0] == 108
    for n in (20, 45, 80):
        a = standard_alpha(n)
        assert len(set(a)) == n and all(0 < x < 2048 for x in a)
    text = write_alpha(alpha)
    assert read_alpha(text) == alpha
    with pytest.raises(CodeError):
        read_alpha("n=3\n1 2\n")
    with pytest.raises(CodeError):
        standard_alpha(101)


def test_solve_linear(f16, rng):
    for _ in range(100):
        nrows, ncols = rng.randrange(1, 5), rng.randrange(1, 5)
        a = [[rng.randrange(16) for _ in range(ncols)] for _ in range(nrows)]
        x = [rng.randrange(16) for _ in range(ncols)]
        b = [0] * nrows
        for i, row in enumerate(a):
            acc = 0
            for u, v in zip(row, x):
                if u and v:
                    acc ^= f16.mul(u, v)
            b[i] = acc
        got = solve_linear(a, b, f16)
        assert got is not None
        check = [0] * nrows
        for i, row in enumerate(a):
            acc = 0
            for u, v in zip(row, got):
                if u and v:
                    acc ^= f16.mul(u, v)
            assert acc == b[i]
