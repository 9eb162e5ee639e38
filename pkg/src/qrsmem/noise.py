"""Instruction-level cost and error model for the concatenated memory.

The model composes three representative instruction classes (half-LPU
in-module, whole-LPU in-module, inter-module measurements) plus idling.
Composite operations carry fixed instruction counts:

* a qudit ZZ (or XX) measurement uses 34 half, 12 whole and 11 inter
  instructions and takes 34 measurement times;
* a general weight-two Z measurement between adjacent blocks uses on
  average 73.05 half, 56.53 whole and 11 inter instructions (means over
  random qudit-to-qubit mappings), takes 117.58 measurement times, and a
  parallel layer of them is budgeted at 125 measurement times.

Post-selection conditions scale the per-class error rates by a pluggable
reduction table and reduce throughput via the survival probabilities.
Derived quantities cover the accepted-cat error distribution, expected
cat-creation time, and the expected idle length of one outer round.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb, floor

CLASSES = ("half", "whole", "inter")


class NoiseError(ValueError):
    pass


class DegenerateP(NoiseError):
    pass


class DivergentRetry(NoiseError):
    pass


@dataclass(frozen=True)
class InstructionRates:
    """Failure probabilities per instruction class and idle round."""

    p_half: float
    p_whole: float
    p_inter: float
    p_idle: float
    tau_meas: int = 120  # physical timesteps per measurement instruction
    tau_idle: int = 8    # physical timesteps per idle round

    def __post_init__(self):
        for name in ("p_half", "p_whole", "p_inter", "p_idle"):
            v = getattr(self, name)
            if not (0.0 <= v < 1.0):
                raise NoiseError(f"{name}={v} outside [0, 1)")

    def rate(self, cls: str) -> float:
        return {"half": self.p_half, "whole": self.p_whole, "inter": self.p_inter}[cls]


def default_rates() -> InstructionRates:
    """Measurement-instruction rates at 1e-3 physical noise (deep-search
    decoder setting) and the standard idling rate 10^-8.8."""
    return InstructionRates(p_half=1.7e-7, p_whole=1.6e-6, p_inter=2.8e-6,
                            p_idle=10**-8.8)


def morphing_idle_rates() -> InstructionRates:
    """Same instruction rates with the improved idling circuit's 4.4e-11."""
    return replace(default_rates(), p_idle=4.4e-11)


def low_noise_rates(p_half: float, p_whole: float) -> InstructionRates:
    """1e-4 physical-noise preset: only the inter-module rate (1.5e-8) is
    pinned; in-module rates must be supplied."""
    return InstructionRates(p_half=p_half, p_whole=p_whole, p_inter=1.5e-8,
                            p_idle=10**-8.8)


@dataclass(frozen=True)
class OpStats:
    """Instruction counts and duration (in measurement times) of one
    composite operation."""

    half: float
    whole: float
    inter: float
    duration: float

    def counts(self):
        return {"half": self.half, "whole": self.whole, "inter": self.inter}


ZZ_STATS = OpStats(half=34, whole=12, inter=11, duration=34)
NONFT_PAIR_STATS = OpStats(half=73.05, whole=56.53, inter=11, duration=117.58)
PAIR_LAYER_DURATION = 125  # worst-of-a-layer duration, in measurement times


@dataclass(frozen=True)
class PsCondition:
    """Per-class post-selection rates for one condition."""

    r_half: float = 0.0
    r_whole: float = 0.0
    r_inter: float = 0.0

    def __post_init__(self):
        for v in (self.r_half, self.r_whole, self.r_inter):
            if not (0.0 <= v < 1.0):
                raise NoiseError(f"post-selection rate {v} outside [0, 1)")

    def rate(self, cls: str) -> float:
        return {"half": self.r_half, "whole": self.r_whole, "inter": self.r_inter}[cls]

    @property
    def trivial(self) -> bool:
        return self.r_half == self.r_whole == self.r_inter == 0.0


class ReductionTable:
    """Post-selection-rate to error-rate-multiplier curves, one per class.

    Piecewise-linear between the given (rate, multiplier) points; the
    default table is the identity (multiplier 1 at every rate), i.e. no
    post-selection benefit is assumed unless curves are supplied.
    """

    def __init__(self, points: dict[str, list[tuple[float, float]]] | None = None):
        self.points = {}
        for cls in CLASSES:
            pts = sorted((points or {}).get(cls, [(0.0, 1.0)]))
            if any(not (0.0 < m <= 1.0) for _, m in pts):
                raise NoiseError("reduction multipliers must be in (0, 1]")
            self.points[cls] = pts

    def multiplier(self, cls: str, rate: float) -> float:
        pts = self.points[cls]
        if rate <= pts[0][0]:
            return pts[0][1]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if rate <= x1:
                frac = (rate - x0) / (x1 - x0)
                return y0 + frac * (y1 - y0)
        return pts[-1][1]


@dataclass(frozen=True)
class PostSelection:
    """The three protocol conditions plus the shared reduction table."""

    c1: PsCondition
    c2: PsCondition
    c3: PsCondition
    reduction: ReductionTable

    @classmethod
    def none(cls) -> "PostSelection":
        return cls(PsCondition(), PsCondition(), PsCondition(), ReductionTable())

    def condition(self, which: int) -> PsCondition:
        return {1: self.c1, 2: self.c2, 3: self.c3}[which]


def composite_rate(stats: OpStats, rates: InstructionRates,
                   ps: PostSelection | None = None, which: int | None = None) -> float:
    """Error probability of a composite op: count-weighted sum of per-class
    rates, each scaled by the surviving-shot multiplier of its condition."""
    total = 0.0
    cond = ps.condition(which) if ps is not None and which is not None else None
    for cls, count in stats.counts().items():
        r = rates.rate(cls)
        if cond is not None:
            r *= ps.reduction.multiplier(cls, cond.rate(cls))
        total += count * r
    return total


def survival_probability(stats: OpStats, cond: PsCondition, scale: float = 1.0) -> float:
    """Probability a composite op survives post-selection: the product of
    per-class survival factors with (real-valued) count exponents."""
    p = 1.0
    for cls, count in stats.counts().items():
        p *= (1.0 - cond.rate(cls)) ** (count * scale)
    return p


def expected_parallel_time(n_tasks: int, p: float) -> float:
    """Expected time to finish n_tasks independent retryable tasks, where a
    success takes unit time and a failure takes half a unit; in units of the
    single-task success time."""
    if not (0.0 < p <= 1.0):
        raise DegenerateP(f"success probability {p} outside (0, 1]")
    if p == 1.0:
        return 1.0
    total = 0.0
    fail = 1.0 - p
    for j in range(1, n_tasks + 1):
        fj = fail**j
        if fj == 0.0:
            break
        term = comb(n_tasks, j) * fj / (1.0 - fj)
        total += term if (j % 2 == 1) else -term
    return 1.0 + 0.5 * total


@dataclass(frozen=True)
class CatModel:
    """Derived rates and times for one cat-state preparation/consumption.

    All probabilities are per attempted operation; times are in physical
    timesteps.  Independent of the number of memory rows m.
    """

    n: int
    rounds: int
    p_zz: float            # any fault in a qudit ZZ (= XX) measurement
    p_zz_c2: float         # same, surviving condition 2
    p_pair_c1: float       # any fault in a weight-two pair measurement, cond 1
    p_pair_c3: float       # same under condition 3
    p_ft_pair: float       # un-post-selected fault in the FT pair gadget
    p_cat_creation: float
    p_cat_consumption: float
    p_cat: float
    p_cat_state_failure: float
    tau_one_layer: float
    tau_nonft_cat: float
    tau_cat: float

    @classmethod
    def build(cls, n: int, rounds: int, rates: InstructionRates,
              ps: PostSelection) -> "CatModel":
        p_zz = composite_rate(ZZ_STATS, rates)
        p_zz_c2 = composite_rate(ZZ_STATS, rates, ps, 2)
        p_pair_c1 = composite_rate(NONFT_PAIR_STATS, rates, ps, 1)
        p_pair_c3 = composite_rate(NONFT_PAIR_STATS, rates, ps, 3)
        p_ft_pair = p_pair_c1 + 2.0 * p_zz_c2
        p_creation = (n / 2.0) * (p_pair_c1 + p_pair_c3) + rounds * (n - 1) * p_ft_pair
        p_consumption = n * p_zz
        p_fail = ((n / 2.0) * p_pair_c1 * p_ft_pair**rounds
                  + (n / 2.0) * p_pair_c3 * p_ft_pair**rounds)
        tau_layer, tau_nonft, tau_cat = cat_time(n, rounds, rates, ps)
        return cls(n, rounds, p_zz, p_zz_c2, p_pair_c1, p_pair_c3, p_ft_pair,
                   p_creation, p_consumption, p_creation + p_consumption,
                   p_fail, tau_layer, tau_nonft, tau_cat)

    def x_weight_bound(self, w: int) -> float:
        """Probability bound for exactly w X errors on an accepted cat."""
        return comb(self.n, w) * self.p_zz_c2**w


def cat_time(n: int, rounds: int, rates: InstructionRates,
             ps: PostSelection) -> tuple[float, float, float]:
    """(one-layer time, non-FT preparation time, full cat time), in
    physical timesteps."""
    tau_meas = rates.tau_meas
    p1 = survival_probability(NONFT_PAIR_STATS, ps.c1)
    tau_one_layer = (PAIR_LAYER_DURATION * tau_meas
                     * expected_parallel_time(floor(n / 2), p1))
    p_second = survival_probability(NONFT_PAIR_STATS, ps.c3, scale=n / 2.0)
    if p_second <= 0.0:
        raise DegenerateP("second-layer survival underflowed to zero")
    tau_nonft = (tau_one_layer / p_second
                 + (1.0 + p_second) / (2.0 * p_second) * PAIR_LAYER_DURATION * tau_meas)
    p2 = survival_probability(ZZ_STATS, ps.c2, scale=n)
    tau_zz = ZZ_STATS.duration * tau_meas
    if p2 == 1.0:
        tau_cat = tau_nonft + 2 * rounds * (tau_one_layer + tau_zz)
    else:
        if p2 <= 0.0:
            raise DegenerateP("ZZ-layer survival underflowed to zero")
        geo = (1.0 - p2 ** (2 * rounds)) / (1.0 - p2)
        tau_cat = (tau_nonft
                   + (tau_one_layer + (1.0 + p2) / 2.0 * tau_zz) * geo) / p2 ** (2 * rounds)
    return tau_one_layer, tau_nonft, tau_cat


def cat_error_distribution(n: int, rounds: int, rates: InstructionRates,
                           ps: PostSelection) -> dict:
    """The accepted-cat error quantities as a dict, for auditability."""
    cat = CatModel.build(n, rounds, rates, ps)
    return {
        "weight_bounds": {w: cat.x_weight_bound(w) for w in (1, 2, 3)},
        "p_cat_state_failure": cat.p_cat_state_failure,
        "p_cat_creation": cat.p_cat_creation,
        "p_cat_consumption": cat.p_cat_consumption,
        "p_cat": cat.p_cat,
    }


def outer_round_length(m: int, d: int, big_m: int, cat: CatModel,
                       rates: InstructionRates) -> float:
    """Expected idle rounds accrued by one data block between two of its
    syndrome-extraction visits."""
    checks = d - 1 + big_m
    reject = checks * cat.p_cat
    if reject >= 1.0:
        raise DivergentRetry(f"(d-1+M) * P[Cat] = {reject:.3f} >= 1")
    tau_zz = ZZ_STATS.duration * rates.tau_meas
    per_block = 6.0 * tau_zz + (2.0 * checks * tau_zz + 2.0 * checks * cat.tau_cat) / (1.0 - reject)
    return (m - 2) / rates.tau_idle * per_block


# ----------------------------------------------------------------------
# Keyed-text config files
# ----------------------------------------------------------------------

class ConfigError(ValueError):
    pass


def read_noise_config(text: str) -> tuple[InstructionRates, PostSelection]:
    """Parse a keyed-text noise config.

    Recognised keys: rate.{half,whole,inter,idle}, tau.{meas,idle},
    ps.c{1,2,3}.{half,whole,inter}, and reduction.{class} whose value is a
    whitespace-separated list of rate:multiplier interpolation points.
    """
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        kv[key] = val

    def grab(key, default=None, cast=float):
        if key in kv:
            try:
                return cast(kv.pop(key))
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}") from exc
        if default is None:
            raise ConfigError(f"missing required key {key}")
        return default

    base = default_rates()
    rates = InstructionRates(
        p_half=grab("rate.half", base.p_half),
        p_whole=grab("rate.whole", base.p_whole),
        p_inter=grab("rate.inter", base.p_inter),
        p_idle=grab("rate.idle", base.p_idle),
        tau_meas=grab("tau.meas", base.tau_meas, int),
        tau_idle=grab("tau.idle", base.tau_idle, int),
    )
    conds = []
    for i in (1, 2, 3):
        conds.append(PsCondition(
            r_half=grab(f"ps.c{i}.half", 0.0),
            r_whole=grab(f"ps.c{i}.whole", 0.0),
            r_inter=grab(f"ps.c{i}.inter", 0.0),
        ))
    points: dict[str, list[tuple[float, float]]] = {}
    for cls in CLASSES:
        key = f"reduction.{cls}"
        if key in kv:
            pts = []
            for tok in kv.pop(key).split():
                try:
                    rate_s, mult_s = tok.split(":")
                    pts.append((float(rate_s), float(mult_s)))
                except ValueError as exc:
                    raise ConfigError(f"bad reduction point {tok!r}") from exc
            points[cls] = pts
    if kv:
        raise ConfigError(f"unknown config keys: {sorted(kv)}")
    ps = PostSelection(conds[0], conds[1], conds[2], ReductionTable(points))
    return rates, ps


def write_noise_config(rates: InstructionRates, ps: PostSelection) -> str:
    lines = [
        f"rate.half = {rates.p_half!r}",
        f"rate.whole = {rates.p_whole!r}",
        f"rate.inter = {rates.p_inter!r}",
        f"rate.idle = {rates.p_idle!r}",
        f"tau.meas = {rates.tau_meas}",
        f"tau.idle = {rates.tau_idle}",
    ]
    for i in (1, 2, 3):
        cond = ps.condition(i)
        for cls in CLASSES:
            lines.append(f"ps.c{i}.{cls} = {cond.rate(cls)!r}")
    for cls in CLASSES:
        pts = ps.reduction.points[cls]
        if pts != [(0.0, 1.0)]:
            lines.append(f"reduction.{cls} = " + " ".join(f"{r}:{m}" for r, m in pts))
    return "\n".join(lines) + "\n"
