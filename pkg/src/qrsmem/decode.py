"""Minimum-weight list decoding of GRS syndromes and collision-fraction
estimation.

The decoder enumerates supports in increasing weight and solves the
restricted linear system per support, which yields the exact minimum-weight
list (ties included).  Fractions F[e -> k x e] are the structure constants
of the space-like failure model: the fraction of weight-e errors whose
syndrome is shared by exactly k other weight-e errors.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field as dfield
from math import comb, sqrt

from .gf import FieldCtx
from .grs import Matrix, TooLarge, mds_weight_count
from . import kernels


class DecodeError(ValueError):
    pass


class NoSolutionWithinBound(DecodeError):
    pass


class Uncovered(DecodeError):
    pass


SUPPORT_GUARD = 10**7


@dataclass
class DecodeResult:
    corrections: list[tuple[int, ...]]  # full-length error vectors
    chosen: tuple[int, ...]
    weight: int
    seed: int | None = None

    @property
    def ambiguous(self) -> bool:
        return len(self.corrections) > 1


def _full_vector(n: int, support, values) -> tuple[int, ...]:
    out = [0] * n
    for pos, val in zip(support, values):
        out[pos] = val
    return tuple(out)


def decode_min_weight(h: Matrix, y: list[int], w_max: int, rng, ctx: FieldCtx,
                      guard: int = SUPPORT_GUARD) -> DecodeResult:
    """Exact minimum-weight correction list for syndrome y, weight <= w_max."""
    n = len(h[0])
    if w_max > n:
        raise DecodeError(f"w_max={w_max} exceeds n={n}")
    for w in range(w_max + 1):
        if comb(n, w) > guard:
            raise TooLarge(f"support enumeration C({n},{w}) over budget")
        sols = kernels.weight_solutions(h, y, w, ctx)
        if sols:
            corrections = [_full_vector(n, s, v) for s, v in sols]
            chosen = corrections[rng.randrange(len(corrections))] if len(corrections) > 1 else corrections[0]
            return DecodeResult(corrections, chosen, w)
    raise NoSolutionWithinBound(f"no correction of weight <= {w_max}")


# ----------------------------------------------------------------------
# Collision fractions
# ----------------------------------------------------------------------

@dataclass
class FractionTable:
    """Empirical F[e -> k x e] for one (n, d, e) at fixed evaluation points."""

    n: int
    d: int
    e: int
    counts: dict[int, int]  # k -> number of sampled errors with k partners
    samples: int
    seed: int
    alpha_hash: str = ""

    def fraction(self, k: int) -> float:
        return self.counts.get(k, 0) / self.samples

    def stderr(self, k: int) -> float:
        f = self.fraction(k)
        return sqrt(f * (1.0 - f) / self.samples)

    def total_fraction(self) -> float:
        """Fraction of errors sharing their syndrome with any partner."""
        return sum(c for k, c in self.counts.items() if k >= 1) / self.samples

    def total_stderr(self) -> float:
        f = self.total_fraction()
        return sqrt(f * (1.0 - f) / self.samples)

    def failure_mass(self) -> float:
        """sum_k k/(k+1) * F[e -> k x e]: tie-loss probability mass."""
        return sum(k / (k + 1) * c for k, c in self.counts.items() if k >= 1) / self.samples

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["n", "d", "e", "k", "fraction", "stderr", "samples", "seed"])
        for k in sorted(self.counts):
            writer.writerow([self.n, self.d, self.e, k,
                             repr(self.fraction(k)), repr(self.stderr(k)),
                             self.samples, self.seed])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FractionTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise DecodeError("empty fraction table")
        first = rows[0]
        samples = int(first["samples"])
        counts = {}
        for row in rows:
            k = int(row["k"])
            counts[k] = round(float(row["fraction"]) * samples)
        return cls(int(first["n"]), int(first["d"]), int(first["e"]),
                   counts, samples, int(first["seed"]))


def alpha_fingerprint(alpha) -> str:
    payload = ",".join(str(a) for a in alpha).encode("ascii")
    return hashlib.sha256(payload).hexdigest()[:16]


def derive_seed(root: int, *parts) -> int:
    """Deterministic 63-bit child seed for a named worker stream."""
    payload = ":".join([str(root), *map(str, parts)]).encode("ascii")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big") >> 1


def load_fraction_dir(path) -> "FractionLookupDir":
    return FractionLookupDir(path)


class FractionLookupDir:
    """Lazy (n, d, e) -> FractionTable lookup over a cache directory of CSV
    files written by the fractions command."""

    def __init__(self, root):
        import pathlib

        self.root = pathlib.Path(root)
        self._cache: dict[tuple[int, int, int], FractionTable | None] = {}

    def path_for(self, n: int, d: int, e: int):
        return self.root / f"frac_n{n}_d{d}_e{e}.csv"

    def __call__(self, n: int, d: int, e: int) -> FractionTable | None:
        key = (n, d, e)
        if key not in self._cache:
            p = self.path_for(n, d, e)
            if p.exists():
                self._cache[key] = FractionTable.from_csv(p.read_text(encoding="ascii"))
            else:
                self._cache[key] = None
        return self._cache[key]


def estimate_fraction_table(h: Matrix, n: int, d: int, e: int, samples: int,
                            seed: int, ctx: FieldCtx, alpha=None,
                            guard: int = SUPPORT_GUARD) -> FractionTable:
    """Monte Carlo estimate of F[e -> k x e] by support enumeration."""
    if comb(n, e) > guard:
        raise TooLarge(f"support enumeration C({n},{e}) over budget")
    counts = kernels.collision_table(h, e, samples, seed, ctx)
    fp = alpha_fingerprint(alpha) if alpha is not None else ""
    return FractionTable(n, d, e, counts, samples, seed, fp)


# ----------------------------------------------------------------------
# Analytic fractions
# ----------------------------------------------------------------------

def _restriction_bound(n: int, d: int, e: int, q: int, w_lo: int, w_hi: int) -> float:
    """Upper bound on a collision fraction by counting weight-e restrictions
    of codewords with weights in [w_lo, w_hi]."""
    total = 0
    for w in range(w_lo, min(w_hi, n) + 1):
        total += comb(w, e) * mds_weight_count(n, d, w, q)
    return total / ((q - 1) ** e * comb(n, e))


def analytic_uncorrectable_fraction(n: int, d: int, e: int, q: int) -> float:
    """Closed-form fraction bounds for the covered (d, e) pairs.

    (4,2) and (6,3): fraction sharing a syndrome with a distinct same-weight
    error.  (5,3) and (7,4): fraction sharing a syndrome with a weight-(e-1)
    error.  (8,4): same-weight sharing.  (8,5) and (9,5): sharing with any
    error of weight <= 5.
    """
    cases = {
        (4, 2): lambda: (n - 2) * (n - 3) / (2 * (q - 1)),
        (5, 3): lambda: (n - 3) * (n - 4) / (2 * (q - 1) ** 2),
        (6, 3): lambda: (n - 3) * (n - 4) * (n - 5) / (6 * (q - 1) ** 2),
        (7, 4): lambda: (n - 4) * (n - 5) * (n - 6) / (6 * (q - 1) ** 3),
        (8, 4): lambda: (n - 4) * (n - 5) * (n - 6) * (n - 7) / (24 * (q - 1) ** 3),
        (8, 5): lambda: _restriction_bound(n, 8, 5, q, 8, 10),
        (9, 5): lambda: _restriction_bound(n, 9, 5, q, 9, 10),
    }
    try:
        return cases[(d, e)]()
    except KeyError:
        raise Uncovered(f"no closed form for (d={d}, e={e})")


def same_weight_collision_bound(n: int, d: int, e: int, q: int) -> float:
    """Upper bound on the fraction of weight-e errors sharing their syndrome
    with a distinct error of weight <= e (restriction counting).  Used as
    the analytic fallback where no sampled table is available."""
    return _restriction_bound(n, d, e, q, d, 2 * e)
