"""Classical generalised Reed-Solomon codes over GF(2^s).

A code is specified by distinct nonzero evaluation points alpha and nonzero
column multipliers: codewords are componentwise-scaled evaluations of the
polynomials of degree < k.  These codes are MDS with parameters
[n, k, n - k + 1], and the dual of GRS_k(alpha, v) is GRS_{n-k}(alpha, u)
with u_i^{-1} = v_i * prod_{j != i} (alpha_i - alpha_j).

Matrices are lists of rows, each row a list of raw field integers.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .gf import FieldCtx


class CodeError(ValueError):
    pass


class DimensionMismatch(CodeError):
    pass


class TooLarge(CodeError):
    pass


Matrix = list[list[int]]


@dataclass(frozen=True)
class GrsCode:
    n: int
    k: int
    alpha: tuple[int, ...]
    mult: tuple[int, ...]
    ctx: FieldCtx

    def __post_init__(self):
        ctx = self.ctx
        if not (0 < self.k <= self.n <= ctx.q):
            raise CodeError(f"bad parameters n={self.n}, k={self.k} over q={ctx.q}")
        if len(self.alpha) != self.n or len(self.mult) != self.n:
            raise CodeError("alpha/mult length must equal n")
        if len(set(self.alpha)) != self.n:
            raise CodeError("evaluation points must be distinct")
        if any(a == 0 for a in self.alpha):
            raise CodeError("evaluation points must be nonzero")
        if any(v == 0 for v in self.mult):
            raise CodeError("column multipliers must be nonzero")

    @property
    def distance(self) -> int:
        return self.n - self.k + 1


def generator_matrix(code: GrsCode) -> Matrix:
    """Row i (0-based) has entries mult_j * alpha_j^i."""
    ctx = code.ctx
    rows = []
    row = list(code.mult)
    for _ in range(code.k):
        rows.append(list(row))
        row = [ctx.mul(x, a) for x, a in zip(row, code.alpha)]
    return rows


def dual(code: GrsCode) -> GrsCode:
    ctx = code.ctx
    u = []
    for i in range(code.n):
        prod = code.mult[i]
        ai = code.alpha[i]
        for j in range(code.n):
            if j != i:
                prod = ctx.mul(prod, ai ^ code.alpha[j])
        u.append(ctx.inv(prod))
    return GrsCode(code.n, code.n - code.k, code.alpha, tuple(u), ctx)


def matmul(a: Matrix, b: Matrix, ctx: FieldCtx) -> Matrix:
    if not a or not b or len(a[0]) != len(b):
        raise DimensionMismatch("incompatible matrix shapes")
    cols = len(b[0])
    out = []
    for row in a:
        acc = [0] * cols
        for x, brow in zip(row, b):
            if x == 0:
                continue
            for j, y in enumerate(brow):
                if y:
                    acc[j] ^= ctx.mul(x, y)
        out.append(acc)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def syndrome(h: Matrix, e: list[int], ctx: FieldCtx) -> list[int]:
    """H . e for a parity matrix H and error vector e."""
    if any(len(row) != len(e) for row in h):
        raise DimensionMismatch("syndrome: matrix/vector size mismatch")
    out = []
    for row in h:
        acc = 0
        for x, y in zip(row, e):
            if x and y:
                acc ^= ctx.mul(x, y)
        out.append(acc)
    return out


def rank(m: Matrix, ctx: FieldCtx) -> int:
    """Gaussian elimination over GF(q)."""
    work = [list(r) for r in m]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = ctx.inv(work[r][c])
        work[r] = [ctx.mul(inv, x) for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x ^ ctx.mul(f, y) for x, y in zip(work[i], work[r])]
        r += 1
        if r == nrows:
            break
    return r


def solve_linear(a: Matrix, b: list[int], ctx: FieldCtx) -> list[int] | None:
    """One solution of A x = b over GF(q), or None when inconsistent.

    Free variables are set to zero.
    """
    if len(a) != len(b):
        raise DimensionMismatch("solve: matrix/vector size mismatch")
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    work = [list(r) + [v] for r, v in zip(a, b)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = ctx.inv(work[r][c])
        work[r] = [ctx.mul(inv, x) for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x ^ ctx.mul(f, y) for x, y in zip(work[i], work[r])]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if work[i][ncols]:
            return None
    x = [0] * ncols
    for i, c in enumerate(piv_cols):
        x[c] = work[i][ncols]
    return x


def iter_codewords(code: GrsCode):
    """All q^k codewords, by iterating messages; small-field oracle only."""
    ctx = code.ctx
    gen = generator_matrix(code)
    msg = [0] * code.k
    while True:
        word = [0] * code.n
        for x, row in zip(msg, gen):
            if x:
                for j, y in enumerate(row):
                    word[j] ^= ctx.mul(x, y)
        yield word
        i = 0
        while i < code.k:
            msg[i] += 1
            if msg[i] < ctx.q:
                break
            msg[i] = 0
            i += 1
        if i == code.k:
            return


def min_distance_bruteforce(code: GrsCode, guard: int = 10**8) -> int:
    if code.ctx.q**code.k * code.n > guard:
        raise TooLarge("codeword enumeration out of budget")
    best = code.n + 1
    for word in iter_codewords(code):
        w = sum(1 for x in word if x)
        if 0 < w < best:
            best = w
    return best


def mds_weight_count(n: int, d: int, w: int, q: int) -> int:
    """Number of weight-w codewords of an [n, n-d+1, d] MDS code.

    Standard MDS weight enumerator; exact integer value.  Weights below the
    distance hold no codewords and return 0 (w = 0 returns 1).
    """
    if w < 0 or w > n:
        raise CodeError(f"weight {w} out of range for n={n}")
    if w == 0:
        return 1
    if w < d:
        return 0
    total = 0
    for j in range(w - d + 1):
        term = comb(w - 1, j) * (q ** (w - d - j))
        total += -term if j % 2 else term
    return comb(n, w) * (q - 1) * total


def random_alpha(ctx: FieldCtx, n: int, rng) -> tuple[int, ...]:
    """n distinct nonzero evaluation points, for test codes."""
    if n > ctx.q - 1:
        raise CodeError("not enough nonzero points")
    return tuple(rng.sample(range(1, ctx.q), n))


# ----------------------------------------------------------------------
# Evaluation-point files: header "n=<int>", then n decimal elements
# ----------------------------------------------------------------------

def read_alpha(text: str) -> tuple[int, ...]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise CodeError("bad evaluation-point header")
    n = int(lines[0][2:])
    vals = tuple(int(tok) for ln in lines[1:] for tok in ln.split())
    if len(vals) != n:
        raise CodeError(f"expected {n} points, found {len(vals)}")
    return vals


def write_alpha(alpha: tuple[int, ...]) -> str:
    return f"n={len(alpha)}\n" + " ".join(str(v) for v in alpha) + "\n"


def standard_alpha(n: int) -> tuple[int, ...]:
    """Packaged evaluation points for the default field, 20 <= n <= 80."""
    path = importlib.resources.files("qrsmem").joinpath(f"data/alpha/alpha_{n}.txt")
    try:
        text = path.read_text(encoding="ascii")
    except FileNotFoundError:
        raise CodeError(f"no packaged evaluation points for n={n}")
    return read_alpha(text)


def support_iter(n: int, w: int):
    return combinations(range(n), w)
