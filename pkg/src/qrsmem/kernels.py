"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled kernel is preferred when importable; set ``QRSMEM_NO_EXT=1``
to force the pure backend (used by the equivalence tests and benchmark).
Both backends expose ``weight_solutions``, ``collision_table``,
``splitmix64`` and a ``BACKEND`` tag, with identical semantics.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernel

if os.environ.get("QRSMEM_NO_EXT"):
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernel

BACKEND = _impl.BACKEND


def active_backend():
    return _impl


def pure_backend():
    return _pykernel


def _tables(ctx):
    exp = np.array(ctx._exp, dtype=np.int32)
    log = np.array(ctx._log, dtype=np.int32)
    return exp, log


def weight_solutions(h, y, w, ctx, limit=65536, impl=None):
    """All weight-w errors with syndrome y under parity matrix h."""
    impl = impl or _impl
    if impl is _pykernel:
        return impl.weight_solutions([list(r) for r in h], list(y), w,
                                     ctx._exp, ctx._log, ctx.q, limit)
    exp, log = _tables(ctx)
    harr = np.array([list(r) for r in h], dtype=np.int32)
    return impl.weight_solutions(harr, list(y), w, exp, log, ctx.q, limit)


def collision_table(h, e, samples, seed, ctx, impl=None):
    """Histogram {k: count} of collision multiplicities over sampled errors."""
    impl = impl or _impl
    if impl is _pykernel:
        return impl.collision_table([list(r) for r in h], e, samples, seed,
                                    ctx._exp, ctx._log, ctx.q)
    exp, log = _tables(ctx)
    harr = np.array([list(r) for r in h], dtype=np.int32)
    return impl.collision_table(harr, e, samples, seed, exp, log, ctx.q)
