"""Backend equivalence: the compiled kernel and the pure twin must agree
bit for bit (same solutions, same sample streams, same histograms)."""

import random

import pytest

from qrsmem import kernels
from qrsmem.gf import field
from qrsmem.grs import GrsCode, generator_matrix, random_alpha, standard_alpha, syndrome


requires_ext = pytest.mark.skipif(
    kernels.active_backend() is kernels.pure_backend(),
    reason="compiled kernel not built",
)


def test_backend_reports_identity():
    assert kernels.BACKEND in ("ext", "pure")


@requires_ext
def test_splitmix_streams_match():
    ext = kernels.active_backend()
    pure = kernels.pure_backend()
    state_e = state_p = 987654321
    for _ in range(200):
        state_e, z_e = ext.splitmix64(state_e)
        state_p, z_p = pure.splitmix64(state_p)
        assert (state_e, z_e) == (state_p, z_p)


@requires_ext
@pytest.mark.parametrize("n,d,e", [(12, 4, 2), (10, 5, 3), (9, 6, 3)])
def test_weight_solutions_equivalence(n, d, e, f16, rng):
    h = generator_matrix(GrsCode(n, d - 1, random_alpha(f16, n, rng), (1,) * n, f16))
    for _ in range(30):
        err = [0] * n
        for pos in rng.sample(range(n), e):
            err[pos] = rng.randrange(1, 16)
        y = syndrome(h, err, f16)
        ext_sols = sorted(kernels.weight_solutions(h, y, e, f16))
        pure_sols = sorted(kernels.weight_solutions(h, y, e, f16,
                                                    impl=kernels.pure_backend()))
        assert ext_sols == pure_sols
        assert (tuple(sorted(i for i, v in enumerate(err) if v)),) not in (None,)
        assert any(set(s) == {i for i, v in enumerate(err) if v} for s, _ in ext_sols)


@requires_ext
def test_collision_tables_identical(f2048):
    h = generator_matrix(GrsCode(20, 3, standard_alpha(20), (1,) * 20, f2048))
    ext = kernels.collision_table(h, 2, 3000, 424242, f2048)
    pure = kernels.collision_table(h, 2, 3000, 424242, f2048,
                                   impl=kernels.pure_backend())
    assert ext == pure


@requires_ext
def test_rank_deficient_support_fallback(f8, rng):
    # a parity matrix with repeated columns forces free variables; both
    # backends must enumerate the same solution set
    h = [[1, 1, 2, 3], [2, 2, 4, 5]]
    for _ in range(20):
        y = [rng.randrange(8), rng.randrange(8)]
        a = sorted(kernels.weight_solutions(h, y, 2, f8))
        b = sorted(kernels.weight_solutions(h, y, 2, f8, impl=kernels.pure_backend()))
        assert a == b
