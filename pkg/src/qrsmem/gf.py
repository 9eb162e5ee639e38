"""Arithmetic in GF(2^s) for configurable extension degree s.

Elements are integers in [0, 2^s) whose binary digits are the coefficients
of a polynomial over GF(2): the integer ``1096 = 1024 + 64 + 8`` is the
element ``t^10 + t^6 + t^3``.  All arithmetic is done modulo an irreducible
degree-s polynomial held by a :class:`FieldCtx`.  The default context is
s = 11 with reduction polynomial ``t^11 + t^2 + 1`` (q = 2048).

Two API levels are provided. ``FieldCtx`` methods operate on raw integers
and are used by matrix/tableau code; :class:`FieldElement` wraps an integer
with its context and overloads the arithmetic operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Reduction polynomial of the default field GF(2^11): t^11 + t^2 + 1.
DEFAULT_POLY = (1 << 11) | (1 << 2) | 1

MAX_DEGREE = 16


class FieldError(ValueError):
    pass


class DivisionByZero(FieldError):
    pass


class OutOfRange(FieldError):
    pass


class MalformedInteger(FieldError):
    pass


# ----------------------------------------------------------------------
# GF(2)[t] helpers on bitmask polynomials (used for context validation)
# ----------------------------------------------------------------------

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    dm = poly_degree(m)
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_mul_mod(a: int, b: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if poly_degree(a) >= poly_degree(m):
            a ^= m
    return r


def poly_is_irreducible(p: int) -> bool:
    """Exhaustive trial division by every lower-degree polynomial."""
    d = poly_degree(p)
    if d < 1 or not (p & 1):
        # A zero constant term means t divides p.
        return d == 1 and p == 0b10  # the polynomial t itself
    for f in range(2, 1 << (d // 2 + 1)):
        if poly_degree(f) >= 1 and poly_mod(p, f) == 0:
            return False
    return True


# ----------------------------------------------------------------------
# Field context
# ----------------------------------------------------------------------

class FieldCtx:
    """GF(2^s) with an explicit reduction polynomial.

    Immutable after construction; shareable across workers.  All methods
    taking ``a``/``b`` expect plain integers in ``[0, q)``.
    """

    def __init__(self, s: int, poly: int | None = None):
        if not (1 <= s <= MAX_DEGREE):
            raise FieldError(f"extension degree s={s} outside [1, {MAX_DEGREE}]")
        if poly is None:
            poly = _default_poly(s)
        if poly_degree(poly) != s:
            raise FieldError(f"reduction polynomial {poly:#b} does not have degree {s}")
        if not poly_is_irreducible(poly):
            raise FieldError(f"reduction polynomial {poly:#b} is reducible")
        self.s = s
        self.poly = poly
        self.q = 1 << s
        self._exp, self._log = self._build_tables()
        self._trace = [self._trace_slow(a) for a in range(self.q)]

    # -- construction helpers ------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        """Carry-less multiply with shift-and-reduce; no tables."""
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & self.q:
                a ^= self.poly
        return r

    def _build_tables(self):
        # Find a multiplicative generator, then lay out log/exp tables.
        # Products from the tables agree bit for bit with _mul_raw.
        order = self.q - 1
        if order == 1:  # GF(2): trivial multiplicative group
            return [1, 1], [0, 0]
        for g in range(2, self.q):
            seen = 1
            x = g
            n = 1
            while x != 1:
                x = self._mul_raw(x, g)
                n += 1
            if n == order:
                break
        else:  # pragma: no cover - every field has a generator
            raise FieldError("no multiplicative generator found")
        exp = [0] * (2 * order)
        log = [0] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            exp[i + order] = x
            log[x] = i
            x = self._mul_raw(x, g)
        return exp, log

    def _trace_slow(self, a: int) -> int:
        acc = 0
        x = a
        for _ in range(self.s):
            acc ^= x
            x = self._mul_raw(x, x)
        assert acc in (0, 1)
        return acc

    # -- arithmetic on raw integers ------------------------------------

    def check(self, a: int) -> int:
        if not (0 <= a < self.q):
            raise OutOfRange(f"{a} not in [0, {self.q})")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, e: int) -> int:
        if e < 0:
            raise FieldError("negative exponent")
        if a == 0:
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def trace(self, a: int) -> int:
        return self._trace[a]

    # -- vectorised helpers (numpy int arrays of raw elements) ---------

    def np_tables(self):
        """(exp, log) as numpy arrays, for gather-based vector products."""
        if not hasattr(self, "_np_exp"):
            self._np_exp = np.array(self._exp, dtype=np.int64)
            self._np_log = np.array(self._log, dtype=np.int64)
        return self._np_exp, self._np_log

    def scale_vec(self, c: int, v: np.ndarray) -> np.ndarray:
        """Componentwise c * v over the field; v is an int array."""
        if c == 0:
            return np.zeros_like(v)
        if c == 1:
            return v.copy()
        exp, log = self.np_tables()
        out = np.zeros_like(v)
        nz = v != 0
        out[nz] = exp[log[v[nz]] + self._log[c]]
        return out

    def dot_vec(self, u: np.ndarray, v: np.ndarray) -> int:
        """Sum_i u_i v_i over the field."""
        exp, log = self.np_tables()
        nz = (u != 0) & (v != 0)
        if not nz.any():
            return 0
        prods = exp[log[u[nz]] + log[v[nz]]]
        return int(np.bitwise_xor.reduce(prods))

    # -- element factory ------------------------------------------------

    def el(self, bits: int) -> "FieldElement":
        return FieldElement(self.check(bits), self)

    def t(self) -> "FieldElement":
        """The polynomial generator t (the element with bits = 2)."""
        return self.el(2)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.s, self.poly) == (other.s, other.poly)

    def __hash__(self):
        return hash((self.s, self.poly))

    def __repr__(self):
        return f"FieldCtx(s={self.s}, poly={self.poly:#x})"


# Irreducible defaults for small s, used by tests and small-field oracles.
_SMALL_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: DEFAULT_POLY,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010101000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


def _default_poly(s: int) -> int:
    try:
        return _SMALL_POLYS[s]
    except KeyError:  # pragma: no cover
        raise FieldError(f"no default polynomial for s={s}")


@lru_cache(maxsize=None)
def field(s: int, poly: int | None = None) -> FieldCtx:
    """Cached context constructor; ``field(11)`` is the default GF(2048)."""
    return FieldCtx(s, poly)


def default_field() -> FieldCtx:
    return field(11, DEFAULT_POLY)


# ----------------------------------------------------------------------
# Element wrapper
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """A field element bound to its context.

    Mixing elements from different contexts is a programming error and is
    rejected by assertion rather than coerced.
    """

    bits: int
    ctx: FieldCtx

    def _same(self, other: "FieldElement") -> None:
        assert isinstance(other, FieldElement) and other.ctx == self.ctx, (
            "field elements from different contexts"
        )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.bits ^ other.bits, self.ctx)

    __sub__ = __add__  # characteristic 2: subtraction is addition

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.ctx.mul(self.bits, other.bits), self.ctx)

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.ctx.pow_(self.bits, e), self.ctx)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx.inv(self.bits), self.ctx)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return self * other.inverse()

    def trace(self) -> int:
        return self.ctx.trace(self.bits)

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return f"el({self.bits})"


# ----------------------------------------------------------------------
# Text representation
# ----------------------------------------------------------------------

def parse_element(text: str, ctx: FieldCtx) -> FieldElement:
    """Parse the decimal representation of an element."""
    try:
        v = int(text.strip(), 10)
    except ValueError as exc:
        raise MalformedInteger(f"not a decimal integer: {text!r}") from exc
    if not (0 <= v < ctx.q):
        raise OutOfRange(f"{v} not in [0, {ctx.q})")
    return ctx.el(v)


def render_element(a: FieldElement) -> str:
    return str(a.bits)
