"""Galois-qudit stabiliser tableau simulator and protocol scripts.

A tableau row is a qudit Pauli (x | z exponent vectors over GF(q)) together
with a syndrome value in GF(q); one row stands for the whole line of its
field multiples, so row combination and scaling act componentwise over the
field.  Two qudit Paulis commute as lines exactly when the GF(q) symplectic
form x_P . z_Q + x_Q . z_P vanishes; the underlying qubit operators commute
iff the trace of that form is zero, and line-wise commutation demands it
for every multiple, which forces the form itself to vanish.

Measurement follows the usual symplectic update: pick an anticommuting
pivot row, fold it into every other anticommuting row, then replace the
pivot with the measured operator and a fresh outcome.  A measurement
*projection* models the software frame update: the recorded outcome
(including any injected flip) becomes the new reference sector, so a
flipped projection leaves the flip value behind as that row's syndrome.

Protocol scripts execute the syndrome-extraction machinery at the qudit
abstraction: cat-state preparation with verification rounds, the
fault-tolerant weight-two Z-measurement gadget, cat consumption against a
data block, and code-block teleportation across ancilla rows.  Faults
inject qudit Paulis on the qudits a step touches and/or flip the step's
measurement outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldCtx
from .grs import GrsCode, generator_matrix, solve_linear
from .qrs import QrsCode


class TableauError(ValueError):
    pass


class ZeroCoefficient(TableauError):
    pass


class InvalidFaultLocation(TableauError):
    pass


# ----------------------------------------------------------------------
# Paulis
# ----------------------------------------------------------------------

@dataclass(eq=False)
class QuditPauli:
    """X^x Z^z on n qudits; exponents are raw field integers."""

    x: np.ndarray
    z: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "QuditPauli":
        return cls(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64))

    @classmethod
    def single(cls, n: int, i: int, x: int = 0, z: int = 0) -> "QuditPauli":
        p = cls.identity(n)
        p.x[i] = x
        p.z[i] = z
        return p

    @classmethod
    def from_vectors(cls, x: Sequence[int], z: Sequence[int]) -> "QuditPauli":
        return cls(np.array(list(x), dtype=np.int64), np.array(list(z), dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.x)

    def support(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.x | self.z)[0]]

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def copy(self) -> "QuditPauli":
        return QuditPauli(self.x.copy(), self.z.copy())

    def equals(self, other: "QuditPauli") -> bool:
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)


def symplectic(p: QuditPauli, q_: QuditPauli, ctx: FieldCtx) -> int:
    """x_P . z_Q + x_Q . z_P over GF(q); zero iff the operator lines commute."""
    return ctx.dot_vec(p.x, q_.z) ^ ctx.dot_vec(q_.x, p.z)


@dataclass(eq=False)
class Row:
    x: np.ndarray
    z: np.ndarray
    s: int              # syndrome value in GF(q)
    kind: str = "stab"  # "stab" | "logical_x" | "logical_z"
    label: str = ""

    def pauli(self) -> QuditPauli:
        return QuditPauli(self.x.copy(), self.z.copy())


def _pairing_sparse(op: QuditPauli, support: list[int], row: Row, ctx: FieldCtx) -> int:
    acc = 0
    for i in support:
        a = int(op.x[i])
        if a:
            b = int(row.z[i])
            if b:
                acc ^= ctx.mul(a, b)
        a = int(op.z[i])
        if a:
            b = int(row.x[i])
            if b:
                acc ^= ctx.mul(a, b)
    return acc


# ----------------------------------------------------------------------
# Tableau
# ----------------------------------------------------------------------

class Tableau:
    """Mutable stabiliser tableau on n Galois qudits."""

    def __init__(self, n_qudits: int, ctx: FieldCtx):
        self.n = n_qudits
        self.ctx = ctx
        self.rows: list[Row] = []

    # -- construction ---------------------------------------------------

    def add_row(self, pauli: QuditPauli, s: int = 0, kind: str = "stab",
                label: str = "") -> None:
        for existing in self.rows:
            if existing.kind == "stab" and kind == "stab":
                if symplectic(existing.pauli(), pauli, self.ctx) != 0:
                    raise TableauError("stabiliser rows must commute")
        self.rows.append(Row(pauli.x.copy(), pauli.z.copy(), s, kind, label))

    @classmethod
    def plus_state(cls, n: int, ctx: FieldCtx) -> "Tableau":
        t = cls(n, ctx)
        for i in range(n):
            t.add_row(QuditPauli.single(n, i, x=1))
        return t

    def copy(self) -> "Tableau":
        t = Tableau(self.n, self.ctx)
        t.rows = [Row(r.x.copy(), r.z.copy(), r.s, r.kind, r.label) for r in self.rows]
        return t

    def stab_rows(self) -> list[Row]:
        return [r for r in self.rows if r.kind == "stab"]

    # -- dynamics ---------------------------------------------------------

    def apply_pauli(self, err: QuditPauli) -> None:
        """Shift every row's syndrome by its symplectic pairing with the error."""
        support = err.support()
        if not support:
            return
        for row in self.rows:
            row.s ^= _pairing_sparse(err, support, row, self.ctx)

    def _coeffs(self, op: QuditPauli) -> list[int]:
        support = op.support()
        return [_pairing_sparse(op, support, row, self.ctx) for row in self.rows]

    def measure(self, op: QuditPauli, rng=None, forced: int | None = None) -> int:
        """Measure a qudit operator; returns the actual outcome value.

        Deterministic when the operator line commutes with all rows (the
        outcome is read off the stabiliser span); otherwise uniform over
        GF(q), unless ``forced`` pins it.
        """
        ctx = self.ctx
        if not op.support():
            return 0
        coeffs = self._coeffs(op)
        pivot = None
        for j, row in enumerate(self.rows):
            if coeffs[j] and row.kind == "stab":
                pivot = j
                break
        if pivot is None:
            if any(coeffs):
                # measuring a logical operator: collapse onto it
                pivot = next(j for j, c in enumerate(coeffs) if c)
            else:
                return self._determined_outcome(op)
        c_star = coeffs[pivot]
        prow = self.rows[pivot]
        inv_c = ctx.inv(c_star)
        for j, row in enumerate(self.rows):
            if j == pivot or not coeffs[j]:
                continue
            f = ctx.mul(coeffs[j], inv_c)
            row.x ^= ctx.scale_vec(f, prow.x)
            row.z ^= ctx.scale_vec(f, prow.z)
            row.s ^= ctx.mul(f, prow.s)
        if forced is not None:
            outcome = forced
        elif rng is not None:
            outcome = rng.randrange(ctx.q)
        else:
            outcome = 0
        self.rows[pivot] = Row(op.x.copy(), op.z.copy(), outcome, "stab")
        return outcome

    def _determined_outcome(self, op: QuditPauli) -> int:
        a, stab = self._express(op)
        acc = 0
        for aj, row in zip(a, stab):
            if aj:
                acc ^= self.ctx.mul(aj, row.s)
        return acc

    def _express(self, op: QuditPauli):
        """Coefficients writing op as a combination of stabiliser rows."""
        stab = self.stab_rows()
        mat = [[int(r.x[i]) for r in stab] for i in range(self.n)]
        mat += [[int(r.z[i]) for r in stab] for i in range(self.n)]
        target = [int(v) for v in op.x] + [int(v) for v in op.z]
        a = solve_linear(mat, target, self.ctx)
        if a is None:
            raise TableauError("commuting operator outside the stabiliser span")
        return a, stab

    def measure_row(self, op: QuditPauli, rng=None, forced: int | None = None) -> tuple[Row, int]:
        """Measure and return the row now carrying the operator.

        Determined measurements rewrite one generator so the measured
        operator appears explicitly (group and state unchanged).
        """
        coeffs = self._coeffs(op)
        if any(coeffs):
            outcome = self.measure(op, rng=rng, forced=forced)
            for row in self.rows:
                if np.array_equal(row.x, op.x) and np.array_equal(row.z, op.z):
                    return row, outcome
            raise TableauError("measured row not found")  # pragma: no cover
        outcome = self._determined_outcome(op)
        a, stab = self._express(op)
        pivot = next(row for aj, row in zip(a, stab) if aj)
        idx = self.rows.index(pivot)
        self.rows[idx] = Row(op.x.copy(), op.z.copy(), outcome, "stab")
        return self.rows[idx], outcome

    def project(self, op: QuditPauli, rng=None, flip: int = 0) -> None:
        """Measure with a software frame update referencing the recorded
        outcome (actual + flip): honest outcomes leave the reference
        sector, a flipped projection leaves the flip behind as the row's
        syndrome."""
        row, _ = self.measure_row(op, rng=rng)
        row.s = flip

    def reset_plus(self, qudit: int, rng=None) -> None:
        """Re-prepare one qudit in |+>: measure X there and zero the frame."""
        row, _ = self.measure_row(QuditPauli.single(self.n, qudit, x=1), rng=rng)
        row.s = 0

    def measure_out(self, qudits: Sequence[int], basis: str, rng=None,
                    flips: dict[int, int] | None = None) -> dict[int, int]:
        """Measure each listed qudit in the X or Z basis and clean its
        support off the kept rows per the recorded outcomes (the software
        frame update).  Measured qudits are left holding bare basis rows.
        Returns the recorded outcomes."""
        ctx = self.ctx
        flips = flips or {}
        part = "x" if basis == "x" else "z"
        recorded: dict[int, int] = {}
        mrows: dict[int, Row] = {}
        for qi in qudits:
            op = QuditPauli.single(self.n, qi, **{part: 1})
            row, actual = self.measure_row(op, rng=rng)
            recorded[qi] = actual ^ flips.get(qi, 0)
            mrows[qi] = row
        # Physical row combination shifts a cleaned row's value by c times the
        # measured outcome; the software correction (computed from the
        # recorded outcome) removes c times the recorded value, so only the
        # flip difference survives as a residual.
        for row in self.rows:
            if any(row is m for m in mrows.values()):
                continue
            for qi, mrow in mrows.items():
                c = int(row.x[qi]) if part == "x" else int(row.z[qi])
                if c:
                    row.x ^= ctx.scale_vec(c, mrow.x)
                    row.z ^= ctx.scale_vec(c, mrow.z)
                    row.s ^= ctx.mul(c, mrow.s ^ recorded[qi])
        return recorded

    def drop_qudits(self, qudits: set[int]) -> "Tableau":
        """Restrict to the complement of ``qudits``; rows supported on the
        dropped set are removed and must not straddle the cut."""
        keep = [i for i in range(self.n) if i not in qudits]
        t = Tableau(len(keep), self.ctx)
        for row in self.rows:
            on_dropped = any(int(row.x[i]) or int(row.z[i]) for i in qudits)
            if on_dropped:
                if any(int(row.x[i]) or int(row.z[i]) for i in keep):
                    raise TableauError("row straddles dropped qudits; clean first")
                continue
            t.rows.append(Row(row.x[keep].copy(), row.z[keep].copy(),
                              row.s, row.kind, row.label))
        return t

    def residual_error(self) -> QuditPauli:
        """A Pauli consistent with all stabiliser syndromes (the frame
        residue), with free components set to zero."""
        stab = self.stab_rows()
        mat = [[int(v) for v in np.concatenate([r.z, r.x])] for r in stab]
        b = [r.s for r in stab]
        sol = solve_linear(mat, b, self.ctx)
        if sol is None:
            raise TableauError("inconsistent syndromes")
        return QuditPauli.from_vectors(sol[: self.n], sol[self.n:])


# ----------------------------------------------------------------------
# Cat states
# ----------------------------------------------------------------------

def cat_rows(gammas: Sequence[int], ctx: FieldCtx, offset: int = 0,
             n_total: int | None = None) -> list[QuditPauli]:
    """Stabiliser rows of Cat(gammas) on qudits offset..offset+C-1."""
    c = len(gammas)
    n = n_total if n_total is not None else c
    if any(g == 0 for g in gammas):
        raise ZeroCoefficient("cat coefficients must be nonzero")
    rows = []
    top = QuditPauli.identity(n)
    for i, g in enumerate(gammas):
        top.x[offset + i] = g
    rows.append(top)
    for i in range(1, c):
        r = QuditPauli.identity(n)
        r.z[offset + i - 1] = gammas[i]
        r.z[offset + i] = gammas[i - 1]
        rows.append(r)
    return rows


def prepare_cat(gammas: Sequence[int], ctx: FieldCtx) -> Tableau:
    """The verified cat state itself (no protocol, no faults)."""
    t = Tableau(len(gammas), ctx)
    for row in cat_rows(gammas, ctx):
        t.add_row(row)
    return t


def clean_z_error(gammas: Sequence[int], err: QuditPauli, ctx: FieldCtx) -> QuditPauli:
    """Equivalent error with Z-support of weight <= 1, by multiplying in
    scaled weight-two Z stabilisers of Cat(gammas) left to right."""
    out = err.copy()
    for i in range(len(gammas) - 1):
        zi = int(out.z[i])
        if zi:
            a = ctx.div(zi, gammas[i + 1])
            out.z[i] = 0
            out.z[i + 1] ^= ctx.mul(a, gammas[i])
    return out


def min_x_weight(x: np.ndarray, gammas: Sequence[int], ctx: FieldCtx) -> int:
    """X-error weight modulo the X^gamma stabiliser line."""
    best = int(np.count_nonzero(x))
    garr = np.array(list(gammas), dtype=np.int64)
    for c in range(1, ctx.q):
        w = int(np.count_nonzero(x ^ ctx.scale_vec(c, garr)))
        if w < best:
            best = w
    return best


# ----------------------------------------------------------------------
# Code states
# ----------------------------------------------------------------------

def code_state(code: QrsCode, with_logicals: bool = False) -> Tableau:
    """A logical basis state of the CSS code on its n qudits.

    Stabiliser rows are the X checks plus the Z-type dual-side completion,
    giving a pure state.  With ``with_logicals`` the logical X/Z rows stay
    labelled (not frozen into the state) and the Z completion stops at the
    proper Z checks.
    """
    ctx = code.ctx
    n = code.n
    t = Tableau(n, ctx)
    for row in code.hx:
        t.add_row(QuditPauli.from_vectors(row, [0] * n), label="hx")
    z_dim = n - code.d + 1
    z_rows = generator_matrix(GrsCode(n, z_dim, code.alpha, code.u, ctx))
    for a, row in enumerate(z_rows):
        if with_logicals and a >= code.d - 1:
            break
        t.add_row(QuditPauli.from_vectors([0] * n, row), label="hz_ext")
    if with_logicals:
        x_rows = generator_matrix(GrsCode(n, z_dim, code.alpha, code.v, ctx))
        for ell in range(code.logical_qudits):
            t.add_row(QuditPauli.from_vectors(x_rows[code.d - 1 + ell], [0] * n),
                      kind="logical_x", label=f"Lx{ell}")
            t.add_row(QuditPauli.from_vectors([0] * n, z_rows[code.d - 1 + ell]),
                      kind="logical_z", label=f"Lz{ell}")
    return t


# ----------------------------------------------------------------------
# Fault injection
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FaultEvent:
    """One injected fault at a protocol step.

    A faulty instruction may leave a qudit Pauli on a qudit the step
    touches (x/z exponents) and/or report a measurement outcome off by
    ``flip``.  ``qudit`` is in protocol coordinates; None for pure flips.
    """

    step: tuple
    qudit: int | None = None
    x: int = 0
    z: int = 0
    flip: int = 0


class _FaultPlan:
    def __init__(self, faults: Iterable[FaultEvent], valid_steps: set[tuple]):
        self.by_step: dict[tuple, list[FaultEvent]] = {}
        for f in faults:
            if f.step not in valid_steps:
                raise InvalidFaultLocation(f"unknown step {f.step!r}")
            self.by_step.setdefault(f.step, []).append(f)

    def pauli(self, tab: Tableau, step: tuple, touched: dict[int, int]) -> None:
        """Deposit the step's Pauli faults; ``touched`` maps protocol qudit
        ids to tableau coordinates."""
        for f in self.by_step.get(step, ()):
            if f.x or f.z:
                if f.qudit not in touched:
                    raise InvalidFaultLocation(
                        f"fault at {step!r} touches qudit {f.qudit} not in step")
                qi = touched[f.qudit]
                tab.apply_pauli(QuditPauli.single(tab.n, qi, x=f.x, z=f.z))

    def flip(self, step: tuple) -> int:
        acc = 0
        for f in self.by_step.get(step, ()):
            acc ^= f.flip
        return acc


@dataclass
class TranscriptEntry:
    step: tuple
    operation: str
    outcome: int | None
    faults: list[FaultEvent]


@dataclass
class TranscriptOutcome:
    accepted: bool
    reason: str
    entries: list[TranscriptEntry]
    tableau: Tableau | None
    residual: QuditPauli | None
    outcomes: dict

    def to_json_lines(self) -> str:
        import json

        lines = []
        for e in self.entries:
            lines.append(json.dumps({
                "step": list(e.step),
                "operation": e.operation,
                "outcome": e.outcome,
                "faults": [
                    {"qudit": f.qudit, "x": f.x, "z": f.z, "flip": f.flip}
                    for f in e.faults
                ],
            }))
        lines.append(json.dumps({"accepted": self.accepted, "reason": self.reason}))
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Protocol scripts
# ----------------------------------------------------------------------

class CatPrepScript:
    """Fault-tolerant cat-state preparation and verification.

    Qudit layout: 0..n-1 cat row; n, n+1 the two ancilla-row qudits used by
    the weight-two measurement gadget (re-prepared per gadget call, as only
    one gadget runs at a time in this simulation).

    Faults for a measurement step are deposited after its measurement (a
    failed instruction corrupts its outcome via ``flip`` and leaves Paulis
    behind); preparation steps deposit faults after the preparation.
    """

    def __init__(self, gammas: Sequence[int], rounds: int, ctx: FieldCtx):
        if any(g == 0 for g in gammas):
            raise ZeroCoefficient("cat coefficients must be nonzero")
        self.gammas = list(gammas)
        self.n = len(gammas)
        self.rounds = rounds
        self.ctx = ctx

    def _pairs(self) -> list[int]:
        # pair index i covers qudits (i-1, i); odd i form the first layer
        order = [i for i in range(1, self.n) if i % 2 == 1]
        order += [i for i in range(1, self.n) if i % 2 == 0]
        return order

    def steps(self) -> list[tuple]:
        out: list[tuple] = [("prep", i) for i in range(self.n)]
        out += [("init", i) for i in self._pairs()]
        for r in range(1, self.rounds + 1):
            for i in self._pairs():
                out += [
                    ("ver", r, i, "anc_prep", 0), ("ver", r, i, "anc_prep", 1),
                    ("ver", r, i, "anc_zz"),
                    ("ver", r, i, "zz", 0), ("ver", r, i, "zz", 1),
                    ("ver", r, i, "anc_meas", 0), ("ver", r, i, "anc_meas", 1),
                ]
        return out

    def run(self, faults: Iterable[FaultEvent] = (), rng=None) -> TranscriptOutcome:
        ctx = self.ctx
        n = self.n
        plan = _FaultPlan(faults, set(self.steps()))
        a1, a2 = n, n + 1
        tab = Tableau(n + 2, ctx)
        entries: list[TranscriptEntry] = []

        def log_step(step, operation, outcome=None):
            entries.append(TranscriptEntry(
                step, operation, None if outcome is None else int(outcome),
                plan.by_step.get(step, [])))

        for i in range(n):
            tab.add_row(QuditPauli.single(n + 2, i, x=1))
        tab.add_row(QuditPauli.single(n + 2, a1, x=1))
        tab.add_row(QuditPauli.single(n + 2, a2, x=1))
        for i in range(n):
            step = ("prep", i)
            plan.pauli(tab, step, {i: i})
            log_step(step, f"prep_plus cat {i}")

        for i in self._pairs():
            step = ("init", i)
            op = QuditPauli.identity(n + 2)
            op.z[i - 1] = self.gammas[i]
            op.z[i] = self.gammas[i - 1]
            tab.project(op, rng=rng, flip=plan.flip(step))
            plan.pauli(tab, step, {i - 1: i - 1, i: i})
            log_step(step, f"project Z pair ({i-1},{i})", 0)

        for r in range(1, self.rounds + 1):
            for i in self._pairs():
                outcome = self._gadget(tab, plan, log_step, r, i, rng)
                if outcome != 0:
                    return TranscriptOutcome(
                        False, f"check ({r},{i}) outcome {outcome}",
                        entries, tab, None, {})
        residual = tab.drop_qudits({a1, a2}).residual_error()
        return TranscriptOutcome(True, "accepted", entries, tab, residual, {})

    def _gadget(self, tab, plan, log_step, r, i, rng):
        """Fault-tolerant Z^alpha Z^beta measurement on cat qudits i-1, i."""
        ctx = self.ctx
        n2 = tab.n
        a1, a2 = self.n, self.n + 1
        alpha = self.gammas[i]   # exponent on qudit i-1
        beta = self.gammas[i - 1]  # exponent on qudit i

        for which, aq in ((0, a1), (1, a2)):
            step = ("ver", r, i, "anc_prep", which)
            tab.reset_plus(aq, rng=rng)
            plan.pauli(tab, step, {aq: aq})
            log_step(step, f"prep_plus ancilla {which}")

        step = ("ver", r, i, "anc_zz")
        op = QuditPauli.identity(n2)
        op.z[a1] = alpha
        op.z[a2] = beta
        tab.project(op, rng=rng, flip=plan.flip(step))
        plan.pauli(tab, step, {a1: a1, a2: a2})
        log_step(step, "project ancilla pair ZZ", 0)

        etas = []
        for side, (cq, aq) in enumerate(((i - 1, a1), (i, a2))):
            step = ("ver", r, i, "zz", side)
            op = QuditPauli.identity(n2)
            op.z[cq] = 1
            op.z[aq] = 1
            actual = tab.measure(op, rng=rng)
            recorded = actual ^ plan.flip(step)
            plan.pauli(tab, step, {cq: cq, aq: aq})
            etas.append(recorded)
            log_step(step, f"measure ZZ cat{cq}/anc{side}", recorded)
        outcome = ctx.mul(alpha, etas[0]) ^ ctx.mul(beta, etas[1])

        flips = {}
        for which, aq in ((0, a1), (1, a2)):
            step = ("ver", r, i, "anc_meas", which)
            plan.pauli(tab, step, {aq: aq})
            flips[aq] = plan.flip(step)
            log_step(step, f"measure out ancilla {which} in X")
        tab.measure_out([a1, a2], "x", rng=rng, flips=flips)
        return outcome

    def enumerate_single_faults(self, values: Iterable[int]) -> list[FaultEvent]:
        """Every single-fault injection over the given nonzero field values:
        each step's touched qudits take every X^x Z^z Pauli, and each
        measurement step takes every outcome flip."""
        vals = [v for v in values if v]
        out: list[FaultEvent] = []
        for step in self.steps():
            if step[0] == "prep":
                touched, flip_ok = [step[1]], False
            elif step[0] == "init":
                touched, flip_ok = [step[1] - 1, step[1]], True
            else:
                _, r, i, kind, *rest = step
                if kind == "anc_prep":
                    touched, flip_ok = [self.n + rest[0]], False
                elif kind == "anc_zz":
                    touched, flip_ok = [self.n, self.n + 1], True
                elif kind == "zz":
                    side = rest[0]
                    touched = [i - 1 if side == 0 else i, self.n + side]
                    flip_ok = True
                elif kind == "anc_meas":
                    touched, flip_ok = [self.n + rest[0]], True
                else:  # pragma: no cover
                    raise InvalidFaultLocation(str(step))
            for q in touched:
                for x in [0] + vals:
                    for z in [0] + vals:
                        if x or z:
                            out.append(FaultEvent(step, q, x=x, z=z))
            if flip_ok:
                for v in vals:
                    out.append(FaultEvent(step, None, flip=v))
        return out


class StabMeasureScript:
    """Consume a prepared cat state to measure one qudit stabiliser.

    Layout: qudits 0..n-1 cat row, n..2n-1 data row.  The data block is a
    code state with an optional planted Z error; the cat enters already
    verified (an optional residual cat error stands in for preparation
    faults) and consumption faults are injected per step.
    """

    def __init__(self, code: QrsCode, gammas: Sequence[int]):
        self.code = code
        self.gammas = list(gammas)
        self.ctx = code.ctx
        self.n = code.n

    def steps(self) -> list[tuple]:
        return [("xx", i) for i in range(self.n)] + [("zout", i) for i in range(self.n)]

    def run(self, planted_z: Sequence[int] | None = None,
            faults: Iterable[FaultEvent] = (), rng=None,
            cat_error: QuditPauli | None = None) -> TranscriptOutcome:
        ctx = self.ctx
        n = self.n
        plan = _FaultPlan(faults, set(self.steps()))
        tab = Tableau(2 * n, ctx)
        for row in cat_rows(self.gammas, ctx, offset=0, n_total=2 * n):
            tab.add_row(row)
        data = code_state(self.code)
        zeros = np.zeros(n, dtype=np.int64)
        for row in data.rows:
            tab.add_row(QuditPauli(np.concatenate([zeros, row.x]),
                                   np.concatenate([zeros, row.z])),
                        label=row.label)
        if planted_z is not None:
            err = QuditPauli.identity(2 * n)
            err.z[n:] = np.array(list(planted_z), dtype=np.int64)
            tab.apply_pauli(err)
        if cat_error is not None:
            err = QuditPauli.identity(2 * n)
            err.x[:n] = cat_error.x
            err.z[:n] = cat_error.z
            tab.apply_pauli(err)

        entries: list[TranscriptEntry] = []
        etas = []
        for i in range(n):
            step = ("xx", i)
            op = QuditPauli.identity(2 * n)
            op.x[i] = 1
            op.x[n + i] = 1
            actual = tab.measure(op, rng=rng)
            recorded = actual ^ plan.flip(step)
            plan.pauli(tab, step, {i: i, n + i: n + i})
            etas.append(recorded)
            entries.append(TranscriptEntry(step, f"measure XX column {i}", recorded,
                                           plan.by_step.get(step, [])))
        outcome = 0
        for g, e in zip(self.gammas, etas):
            if e:
                outcome ^= ctx.mul(g, e)
        flips = {}
        for i in range(n):
            step = ("zout", i)
            plan.pauli(tab, step, {i: i})
            flips[i] = plan.flip(step)
            entries.append(TranscriptEntry(step, f"measure out cat {i} in Z", None,
                                           plan.by_step.get(step, [])))
        tab.measure_out(range(n), "z", rng=rng, flips=flips)
        final = tab.drop_qudits(set(range(n)))
        residual = final.residual_error()
        return TranscriptOutcome(True, "done", entries, final, residual,
                                 {"etas": etas, "outcome": outcome})


class TeleportScript:
    """Teleport a code block across two ancilla rows.

    Layout: 0..n-1 data row, n..2n-1 first ancilla row, 2n..3n-1 second
    ancilla row.  After the columnwise ZZ/XX measurements and frame
    updates, the block lives on the second ancilla row.
    """

    def __init__(self, code: QrsCode):
        self.code = code
        self.ctx = code.ctx
        self.n = code.n

    def steps(self) -> list[tuple]:
        n = self.n
        return ([("anc_zz", i) for i in range(n)]
                + [("zz", i) for i in range(n)] + [("xx", i) for i in range(n)])

    def run(self, planted: QuditPauli | None = None,
            faults: Iterable[FaultEvent] = (), rng=None) -> TranscriptOutcome:
        ctx = self.ctx
        n = self.n
        plan = _FaultPlan(faults, set(self.steps()))
        tab = Tableau(3 * n, ctx)
        state = code_state(self.code, with_logicals=True)
        zeros = np.zeros(2 * n, dtype=np.int64)
        for row in state.rows:
            tab.add_row(QuditPauli(np.concatenate([row.x, zeros]),
                                   np.concatenate([row.z, zeros])),
                        kind=row.kind, label=row.label)
        for i in range(2 * n):
            tab.add_row(QuditPauli.single(3 * n, n + i, x=1))
        if planted is not None:
            err = QuditPauli.identity(3 * n)
            err.x[:n] = planted.x
            err.z[:n] = planted.z
            tab.apply_pauli(err)

        entries: list[TranscriptEntry] = []
        outcomes = {"zz": [], "xx": []}
        pair_rows: list[Row] = []
        for i in range(n):
            step = ("anc_zz", i)
            op = QuditPauli.identity(3 * n)
            op.z[n + i] = 1
            op.z[2 * n + i] = 1
            tab.project(op, rng=rng, flip=plan.flip(step))
            plan.pauli(tab, step, {n + i: n + i, 2 * n + i: 2 * n + i})
            entries.append(TranscriptEntry(step, f"project anc ZZ pair {i}", 0,
                                           plan.by_step.get(step, [])))
        for name in ("zz", "xx"):
            for i in range(n):
                step = (name, i)
                op = QuditPauli.identity(3 * n)
                if name == "zz":
                    op.z[i] = 1
                    op.z[n + i] = 1
                else:
                    op.x[i] = 1
                    op.x[n + i] = 1
                row, actual = tab.measure_row(op, rng=rng)
                recorded = actual ^ plan.flip(step)
                plan.pauli(tab, step, {i: i, n + i: n + i})
                outcomes[name].append(recorded)
                # frame update: recorded value becomes the reference
                row.s ^= recorded
                pair_rows.append(row)
                entries.append(TranscriptEntry(step, f"measure {name} column {i}",
                                               recorded, plan.by_step.get(step, [])))
        final = self._restrict_to_target(tab, pair_rows)
        residual = final.residual_error()
        return TranscriptOutcome(True, "done", entries, final, residual, outcomes)

    def _restrict_to_target(self, tab: Tableau, pair_rows: list[Row]) -> Tableau:
        """Fold measured-pair and ancilla rows into the block rows until they
        act only on the second ancilla row, then restrict."""
        ctx = self.ctx
        n = self.n
        cleaners = list(pair_rows)
        for row in tab.rows:
            if any(row is c for c in cleaners):
                continue
            if not any(int(row.x[i]) or int(row.z[i]) for i in range(2 * n, 3 * n)):
                # rows fully on data/anc1 (e.g. leftover anc projections)
                cleaners.append(row)
        mat = [[int(v) for v in np.concatenate([r.x[:2 * n], r.z[:2 * n]])]
               for r in cleaners]
        cols = [[mat[j][i] for j in range(len(cleaners))] for i in range(4 * n)]
        out = Tableau(n, ctx)
        for row in tab.rows:
            if any(row is c for c in cleaners):
                continue
            target = [int(v) for v in np.concatenate([row.x[:2 * n], row.z[:2 * n]])]
            x, z, s = row.x.copy(), row.z.copy(), row.s
            if any(target):
                coeffs = solve_linear(cols, target, ctx)
                if coeffs is None:
                    raise TableauError("row cannot be cleaned onto target row")
                for cf, crow in zip(coeffs, cleaners):
                    if cf:
                        x ^= ctx.scale_vec(cf, crow.x)
                        z ^= ctx.scale_vec(cf, crow.z)
                        s ^= ctx.mul(cf, crow.s)
            if any(int(v) for v in np.concatenate([x[:2 * n], z[:2 * n]])):
                raise TableauError("cleaning left support outside the target row")
            out.rows.append(Row(x[2 * n:].copy(), z[2 * n:].copy(), s,
                                row.kind, row.label))
        return out
