"""Parameter sweep, qubit accounting, Pareto frontier, and crossover.

A sweep point fixes the outer-code shape (n columns, m rows, distance d),
the number of extra time-like checks M, the cat verification depth R, and
the post-selection setup.  The qubit accounting is exact:

    physical = 378 n m + 44 (n-1)(m-1) + 22 (n-1) + 22 (m-1)
    logical  = 11 (m-2) (n - 2(d-1))

Comparison curves (for crossover reporting) are external data, supplied as
(ler, overhead) CSV files; they are never synthesised here.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field as dfield
from typing import Iterable

from .failure import FailureBreakdown, FailureModelError, total_failure
from .noise import CatModel, DivergentRetry, InstructionRates, PostSelection


class FrontierError(ValueError):
    pass


class NoBaseline(FrontierError):
    pass


@dataclass(frozen=True)
class ProtocolParams:
    n: int
    m: int
    d: int
    big_m: int
    rounds: int

    def __post_init__(self):
        if not (2 * (self.d - 1) < self.n):
            raise FrontierError(f"need 2(d-1) < n: {self}")
        if not (1 <= self.big_m <= self.d - 2):
            raise FrontierError(f"need 1 <= M <= d-2: {self}")
        if self.m < 3:
            raise FrontierError(f"need m >= 3: {self}")


def qubit_counts(n: int, m: int, d: int) -> tuple[int, int, float]:
    physical = 378 * n * m + 44 * (n - 1) * (m - 1) + 22 * (n - 1) + 22 * (m - 1)
    logical = 11 * (m - 2) * (n - 2 * (d - 1))
    return physical, logical, physical / logical


@dataclass(frozen=True)
class FrontierPoint:
    params: ProtocolParams
    physical: int
    logical: int
    overhead: float
    ler_per_lqr: float
    breakdown: FailureBreakdown


@dataclass(frozen=True)
class SweepGrid:
    n_values: tuple[int, ...] = tuple(range(20, 81))
    m_values: tuple[int, ...] = tuple(range(3, 51))
    d_values: tuple[int, ...] = (3, 4, 5, 6, 7, 8, 9)
    big_m_values: tuple[int, ...] = (1, 2)
    rounds_values: tuple[int, ...] = (1, 2)
    max_physical: int = 500_000


def sweep(rates: InstructionRates, ps: PostSelection, grid: SweepGrid,
          fractions=None, q: int = 2048,
          skip_log: list | None = None) -> list[FrontierPoint]:
    """Evaluate the failure model on every feasible grid point.

    Points violating the qubit cap are skipped silently; model-level
    infeasibilities (divergent retries and the like) are recorded in
    ``skip_log`` when given.
    """
    points: list[FrontierPoint] = []
    for n in grid.n_values:
        for d in grid.d_values:
            if 2 * (d - 1) >= n:
                continue
            for big_m in grid.big_m_values:
                if big_m > d - 2:
                    continue
                for rounds in grid.rounds_values:
                    cat = CatModel.build(n, rounds, rates, ps)
                    for m in grid.m_values:
                        physical, logical, overhead = qubit_counts(n, m, d)
                        if physical > grid.max_physical:
                            continue
                        params = ProtocolParams(n, m, d, big_m, rounds)
                        try:
                            bd = total_failure(n, m, d, big_m, rounds, q,
                                               rates, ps, fractions, cat=cat)
                        except (DivergentRetry, FailureModelError) as exc:
                            if skip_log is not None:
                                skip_log.append((params, str(exc)))
                            continue
                        points.append(FrontierPoint(params, physical, logical,
                                                    overhead, bd.ler_per_lqr, bd))
    return points


def pareto(points: Iterable[FrontierPoint]) -> list[FrontierPoint]:
    """Nondominated set: no other point has both lower-or-equal LER and
    lower-or-equal overhead (with one strict).  Sorted by LER ascending."""
    ordered = sorted(points, key=lambda p: (p.ler_per_lqr, p.overhead))
    frontier: list[FrontierPoint] = []
    best = math.inf
    for p in ordered:
        if p.overhead < best:
            frontier.append(p)
            best = p.overhead
    return frontier


def crossover(frontier_a: list[tuple[float, float]],
              frontier_b: list[tuple[float, float]]) -> float | None:
    """The LER at which curve a's overhead first exceeds curve b's, scanning
    from low LER upward, by interpolation in log-log space.

    Inputs are (ler, overhead) pairs; returns None when the curves' LER
    ranges do not overlap or the difference never changes sign.
    """
    if not frontier_a or not frontier_b:
        raise NoBaseline("both frontiers must be nonempty")

    def prep(curve):
        pts = sorted((math.log10(l), math.log10(o)) for l, o in curve)
        return pts

    a = prep(frontier_a)
    b = prep(frontier_b)
    lo = max(a[0][0], b[0][0])
    hi = min(a[-1][0], b[-1][0])
    if lo > hi:
        return None

    def interp(pts, x):
        if x <= pts[0][0]:
            return pts[0][1]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x <= x1:
                if x1 == x0:
                    return y1
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return pts[-1][1]

    steps = 2048
    prev_x = None
    prev_diff = None
    for i in range(steps + 1):
        x = lo + (hi - lo) * i / steps
        diff = interp(a, x) - interp(b, x)
        if prev_diff is not None and (diff > 0) != (prev_diff > 0):
            if diff == prev_diff:
                return 10**x
            frac = -prev_diff / (diff - prev_diff)
            return 10 ** (prev_x + (x - prev_x) * frac)
        if diff > 0 and i == 0:
            return 10**x
        prev_x, prev_diff = x, diff
    return None


# ----------------------------------------------------------------------
# CSV interfaces
# ----------------------------------------------------------------------

SWEEP_COLUMNS = ["n", "m", "d", "M", "R",
                 "r1_half", "r1_whole", "r1_inter",
                 "r2_half", "r2_whole", "r2_inter",
                 "r3_half", "r3_whole", "r3_inter",
                 "physical", "logical", "overhead", "ler_per_lqr",
                 "tlf1", "tlf2", "tlf3", "slf", "cat_burst"]


def points_to_csv(points: Iterable[FrontierPoint], ps: PostSelection) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(SWEEP_COLUMNS)
    ps_cols = []
    for i in (1, 2, 3):
        cond = ps.condition(i)
        ps_cols += [repr(cond.r_half), repr(cond.r_whole), repr(cond.r_inter)]
    for p in points:
        writer.writerow([p.params.n, p.params.m, p.params.d, p.params.big_m,
                         p.params.rounds, *ps_cols,
                         p.physical, p.logical, repr(p.overhead),
                         repr(p.ler_per_lqr), repr(p.breakdown.tlf1),
                         repr(p.breakdown.tlf2), repr(p.breakdown.tlf3),
                         repr(p.breakdown.slf), repr(p.breakdown.cat_burst)])
    return buf.getvalue()


def read_baseline_csv(text: str) -> list[tuple[float, float]]:
    """Baseline comparison curve: rows of (ler, overhead)."""
    out = []
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        if not row or row[0].strip().startswith("#"):
            continue
        try:
            ler, overhead = float(row[0]), float(row[1])
        except (ValueError, IndexError):
            if out:
                raise FrontierError(f"bad baseline row: {row!r}")
            continue  # tolerate a header line
        out.append((ler, overhead))
    if not out:
        raise NoBaseline("baseline file holds no points")
    return out


def frontier_curve(points: Iterable[FrontierPoint]) -> list[tuple[float, float]]:
    return [(p.ler_per_lqr, p.overhead) for p in pareto(points)]
