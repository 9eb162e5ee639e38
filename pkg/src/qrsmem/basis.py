"""Bases of GF(2^s) over GF(2) and the qudit-to-qubit expansion maps.

A basis drives the binarisation of qudit objects: a field element expands
to the s-bit vector of its coordinates, and the dual basis supplies those
coordinates through the trace form, ``coord_i(a) = Tr(a * B*_i)``.  A
self-dual basis (``Tr(B_i B_j) = delta_ij``) lets the same map expand both
X-type and Z-type objects.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .gf import FieldCtx, FieldError, default_field, field


class BasisError(ValueError):
    pass


class SingularGram(BasisError):
    pass


def _gf2_rank(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            if lead in pivots:
                r ^= pivots[lead]
            else:
                pivots[lead] = r
                rank += 1
                break
    return rank


def _gf2_invert(rows: list[int], s: int) -> list[int]:
    """Invert an s x s GF(2) matrix given as row bitmasks (bit k = column k)."""
    aug = [(rows[i] << s) | (1 << i) for i in range(s)]
    for col in range(s):
        pivot_bit = 1 << (s + col)
        pivot = next((i for i in range(col, s) if aug[i] & pivot_bit), None)
        if pivot is None:
            raise SingularGram("matrix is singular over GF(2)")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for i in range(s):
            if i != col and aug[i] & pivot_bit:
                aug[i] ^= aug[col]
    mask = (1 << s) - 1
    return [aug[i] & mask for i in range(s)]


@dataclass(frozen=True)
class QuditBasis:
    """An ordered GF(2)-basis (B_0 .. B_{s-1}) of GF(2^s)."""

    elements: tuple[int, ...]
    ctx: FieldCtx

    def __post_init__(self):
        if len(self.elements) != self.ctx.s:
            raise BasisError(f"need {self.ctx.s} elements, got {len(self.elements)}")
        for e in self.elements:
            self.ctx.check(e)
        if _gf2_rank(list(self.elements)) != self.ctx.s:
            raise BasisError("elements are GF(2)-linearly dependent")

    def gram(self) -> list[int]:
        """Trace Gram matrix Tr(B_i B_j) as row bitmasks."""
        ctx = self.ctx
        rows = []
        for bi in self.elements:
            row = 0
            for j, bj in enumerate(self.elements):
                row |= ctx.trace(ctx.mul(bi, bj)) << j
            rows.append(row)
        return rows

    def __iter__(self):
        return iter(self.elements)


def is_self_dual(basis: QuditBasis) -> bool:
    return basis.gram() == [1 << i for i in range(basis.ctx.s)]


def dual_basis(basis: QuditBasis) -> QuditBasis:
    """The basis B* with Tr(B_i B*_j) = delta_ij.

    Always exists for a true basis because the trace form is nondegenerate;
    a SingularGram error therefore signals an invariant violation upstream.
    """
    ctx = basis.ctx
    s = ctx.s
    # M[i] has bit k = Tr(B_i t^k); solve M C^T = I for the dual coordinates.
    m_rows = []
    for bi in basis.elements:
        row = 0
        for k in range(s):
            row |= ctx.trace(ctx.mul(bi, 1 << k)) << k
        m_rows.append(row)
    c_t = _gf2_invert(m_rows, s)
    # Column j of the inverse gives B*_j in the polynomial basis.
    duals = []
    for j in range(s):
        bits = 0
        for k in range(s):
            if (c_t[k] >> j) & 1:
                bits ^= 1 << k
        duals.append(bits)
    return QuditBasis(tuple(duals), ctx)


def expand(a: int, basis: QuditBasis, dual: QuditBasis | None = None) -> list[int]:
    """Coordinates of ``a`` in ``basis`` as a list of s bits."""
    ctx = basis.ctx
    dual = dual if dual is not None else dual_basis(basis)
    return [ctx.trace(ctx.mul(a, d)) for d in dual.elements]


def contract(bits: Sequence[int], basis: QuditBasis) -> int:
    ctx = basis.ctx
    acc = 0
    for bit, b in zip(bits, basis.elements, strict=True):
        if bit:
            acc ^= b
    return ctx.check(acc)


def random_basis(ctx: FieldCtx, rng) -> QuditBasis:
    """Uniformly random ordered basis, by rejection sampling."""
    while True:
        els = tuple(rng.randrange(ctx.q) for _ in range(ctx.s))
        if _gf2_rank(list(els)) == ctx.s:
            return QuditBasis(els, ctx)


def all_bases(ctx: FieldCtx):
    """Every ordered basis; only feasible for tiny fields (test oracle)."""
    for els in product(range(1, ctx.q), repeat=ctx.s):
        if _gf2_rank(list(els)) == ctx.s:
            yield QuditBasis(els, ctx)


def self_dual_bases(ctx: FieldCtx):
    """Brute-force search for self-dual bases; s <= 4 only (test oracle)."""
    if ctx.s > 4:
        raise BasisError("self-dual search is a brute-force oracle for s <= 4")
    norm_one = [a for a in range(1, ctx.q) if ctx.trace(ctx.mul(a, a)) == 1]
    for els in product(norm_one, repeat=ctx.s):
        b = None
        ok = True
        for i in range(ctx.s):
            for j in range(i):
                if ctx.trace(ctx.mul(els[i], els[j])) != 0:
                    ok = False
                    break
            if not ok:
                break
        if ok and _gf2_rank(list(els)) == ctx.s:
            yield QuditBasis(els, ctx)


@dataclass(frozen=True)
class MappingSet:
    """Per-coordinate qudit-to-qubit mappings for a length-n code."""

    per_coordinate: tuple[QuditBasis, ...]

    def __post_init__(self):
        if not self.per_coordinate:
            raise BasisError("empty mapping set")
        ctx = self.per_coordinate[0].ctx
        if any(b.ctx != ctx for b in self.per_coordinate):
            raise BasisError("all mappings must share one field context")

    @property
    def ctx(self) -> FieldCtx:
        return self.per_coordinate[0].ctx

    def __len__(self):
        return len(self.per_coordinate)

    def __getitem__(self, i: int) -> QuditBasis:
        return self.per_coordinate[i]

    @classmethod
    def uniform(cls, basis: QuditBasis, n: int) -> "MappingSet":
        return cls((basis,) * n)

    @classmethod
    def random(cls, ctx: FieldCtx, n: int, rng) -> "MappingSet":
        return cls(tuple(random_basis(ctx, rng) for _ in range(n)))


# ----------------------------------------------------------------------
# File format: header line "s=<int> poly=<int>", then s decimal elements
# ----------------------------------------------------------------------

def write_basis(basis: QuditBasis) -> str:
    lines = [f"s={basis.ctx.s} poly={basis.ctx.poly}"]
    lines += [str(e) for e in basis.elements]
    return "\n".join(lines) + "\n"


def read_basis(text: str) -> QuditBasis:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise BasisError("empty basis file")
    try:
        header = dict(part.split("=", 1) for part in lines[0].split())
        s = int(header["s"])
        poly = int(header["poly"])
    except (KeyError, ValueError) as exc:
        raise BasisError(f"bad basis header: {lines[0]!r}") from exc
    ctx = field(s, poly)
    try:
        els = tuple(int(ln) for ln in lines[1:])
    except ValueError as exc:
        raise BasisError("bad basis element line") from exc
    if len(els) != s:
        raise BasisError(f"expected {s} elements, found {len(els)}")
    for e in els:
        if not (0 <= e < ctx.q):
            raise BasisError(f"element {e} out of range")
    return QuditBasis(els, ctx)


def load_basis_file(path) -> QuditBasis:
    with open(path, "r", encoding="ascii") as fh:
        return read_basis(fh.read())


def standard_self_dual_basis() -> QuditBasis:
    """The packaged self-dual basis for the default s = 11 field."""
    text = (
        importlib.resources.files("qrsmem")
        .joinpath("data/selfdual_basis_s11.txt")
        .read_text(encoding="ascii")
    )
    basis = read_basis(text)
    if basis.ctx != default_field():
        raise FieldError("packaged basis has unexpected context")
    return basis
