"""Quantum Reed-Solomon CSS codes over Galois qudits, and binarisation.

A code of length n and distance d pairs two nested classical GRS codes:
the X-check matrix generates GRS_{d-1}(alpha, u) and the Z-check matrix
GRS_{d-1}(alpha, v), with u and v linked by the dual-code relation so that
``hx . hz^T = 0`` over GF(q).  Parameters are [[n, n - 2(d-1), d]]_q.

Binarisation converts the qudit stabiliser matrices to GF(2) stabiliser
rows for the equivalent [[ns, ks, >= d]] qubit code, given a per-coordinate
choice of GF(2)-basis (the qudit-to-qubit mapping).
"""

from __future__ import annotations

from dataclasses import dataclass

from .basis import MappingSet, QuditBasis, dual_basis, is_self_dual
from .gf import FieldCtx
from .grs import CodeError, GrsCode, Matrix, dual, generator_matrix, matmul, transpose


class BadParameters(CodeError):
    pass


class BasisMismatch(CodeError):
    pass


@dataclass(frozen=True)
class QrsCode:
    n: int
    d: int
    alpha: tuple[int, ...]
    v: tuple[int, ...]
    u: tuple[int, ...]
    hx: Matrix
    hz: Matrix
    ctx: FieldCtx

    @property
    def logical_qudits(self) -> int:
        return self.n - 2 * (self.d - 1)


def build_qrs(n: int, d: int, alpha, v, ctx: FieldCtx) -> QrsCode:
    """Construct the CSS pair; hx rows are v_b alpha_b^(a-1), hz rows u_b alpha_b^(a-1)."""
    if not (2 * (d - 1) < n <= ctx.q):
        raise BadParameters(f"need 2(d-1) < n <= q, got n={n}, d={d}")
    alpha = tuple(alpha)
    v = tuple(v)
    x_code = GrsCode(n, d - 1, alpha, v, ctx)
    # The dual relation fixes u so that the two row spaces are orthogonal.
    u = dual(GrsCode(n, n - d + 1, alpha, v, ctx)).mult
    z_code = GrsCode(n, d - 1, alpha, u, ctx)
    hx = generator_matrix(x_code)
    hz = generator_matrix(z_code)
    for row in matmul(hx, transpose(hz), ctx):
        assert all(x == 0 for x in row), "hx . hz^T != 0"
    return QrsCode(n, d, alpha, v, u, hx, hz, ctx)


def qudit_pairing(stab: list[int], err: list[int], ctx: FieldCtx) -> int:
    """Syndrome component sum_i stab_i * err_i extracted against an error."""
    if len(stab) != len(err):
        raise CodeError("pairing: length mismatch")
    acc = 0
    for g, e in zip(stab, err):
        if g and e:
            acc ^= ctx.mul(g, e)
    return acc


@dataclass(frozen=True)
class BinarizedCss:
    x_rows: list[int]  # bitmasks of length s*n, bit c = column c
    z_rows: list[int]
    n: int
    s: int
    mapping: MappingSet


def _expand_row(row, mapping, row_basis, side_dual, ctx) -> list[int]:
    """Binarise the s multiples of one qudit stabiliser row.

    For X-type rows the entry at qubit column (b, k) is Tr(m_i * row_b * B*_k)
    and for Z-type rows Tr(m_i * row_b * B_k); with a self-dual mapping both
    reduce to the same rule.
    """
    out = []
    per_coord = []
    for b, basis in enumerate(mapping.per_coordinate):
        per_coord.append(dual_basis(basis).elements if side_dual else basis.elements)
    for m_i in row_basis:
        bits = 0
        col = 0
        for b, entry in enumerate(row):
            scaled = ctx.mul(m_i, entry)
            for bk in per_coord[b]:
                if ctx.trace(ctx.mul(scaled, bk)):
                    bits |= 1 << col
                col += 1
        out.append(bits)
    return out


def binarize(code: QrsCode, mapping: MappingSet, row_basis: QuditBasis | None = None) -> BinarizedCss:
    """Expand qudit stabiliser matrices to GF(2) rows.

    ``row_basis`` enumerates the s field multiples spanning each qudit row;
    it defaults to the first coordinate's mapping basis, which reproduces
    the standard listing when one self-dual basis is used everywhere.
    """
    if len(mapping) != code.n:
        raise BasisMismatch(f"mapping length {len(mapping)} != n={code.n}")
    if mapping.ctx != code.ctx:
        raise BasisMismatch("mapping and code use different field contexts")
    ctx = code.ctx
    basis_row = row_basis if row_basis is not None else mapping[0]
    x_rows: list[int] = []
    z_rows: list[int] = []
    for row in code.hx:
        x_rows += _expand_row(row, mapping, basis_row.elements, True, ctx)
    for row in code.hz:
        z_rows += _expand_row(row, mapping, basis_row.elements, False, ctx)
    return BinarizedCss(x_rows, z_rows, code.n, ctx.s, mapping)


def format_rows(rows: list[int], n: int, s: int) -> str:
    """Render rows in the listing format: "1: [<s bits> <s bits> ...]"."""
    lines = []
    for idx, bits in enumerate(rows, start=1):
        groups = []
        for b in range(n):
            groups.append("".join(str((bits >> (b * s + k)) & 1) for k in range(s)))
        lines.append(f"{idx}: [{' '.join(groups)}]")
    return "\n".join(lines) + "\n"


def format_binarized(css: BinarizedCss) -> str:
    return (
        "X stabilisers\n"
        + format_rows(css.x_rows, css.n, css.s)
        + "Z stabilisers\n"
        + format_rows(css.z_rows, css.n, css.s)
    )


def gf2_orthogonal(x_rows: list[int], z_rows: list[int]) -> bool:
    return all((x & z).bit_count() % 2 == 0 for x in x_rows for z in z_rows)


def uniform_self_dual_mapping(code: QrsCode, basis: QuditBasis) -> MappingSet:
    if not is_self_dual(basis):
        raise BasisMismatch("expected a self-dual basis")
    return MappingSet.uniform(basis, code.n)
