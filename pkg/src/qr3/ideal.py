"""Graded pieces of the homogeneous ideal of an embedded curve.

I(C)_k is the kernel of the multiplication map Sym^k V -> H^0(kL) for the
section space V. It is never interpolated from sampled points: small prime
fields cannot supply enough of them, while the kernel is exact for the
integral curves handled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .curves import SectionSpace
from .errors import DimensionFloor, DimensionMismatch
from .field import FieldSpec
from .linalg import IncrementalSpan, Matrix, kernel_basis, rank
from .quadric import QuadraticForm, sym2_index, sym3_index


def expected_quadric_dim(d: int, g: int) -> int:
    """dim I(C)_2 for a projectively normal curve of degree d and genus g."""
    return comb(d - g, 2) - g


@dataclass(frozen=True, eq=False)
class QuadricSpace:
    ambient_dim: int
    field: FieldSpec
    basis: tuple
    source: SectionSpace | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nvars(self) -> int:
        return self.ambient_dim + 1

    def flat_rows(self) -> list[list]:
        return [q.flat() for q in self.basis]

    def ranks(self) -> list[int]:
        return [q.rank for q in self.basis]


@dataclass(frozen=True)
class CubicSpace:
    nvars: int
    field: FieldSpec
    basis: Matrix  # columns in Sym^3 monomial coordinates

    @property
    def dim(self) -> int:
        return self.basis.ncols


@dataclass(frozen=True)
class GenerationReport:
    generated: bool
    dim_i2: int
    dim_i3: int
    span_dim: int
    deficit: int
    note: str = "degree-3 surjectivity verified; higher degrees by cited theory"

    def to_dict(self) -> dict:
        return {
            "generated": self.generated,
            "dim_i2": self.dim_i2,
            "dim_i3": self.dim_i3,
            "span_dim": self.span_dim,
            "deficit": self.deficit,
            "note": self.note,
        }


def _pair_products(space: SectionSpace) -> dict:
    key = "pair_products"
    if key not in space.cache:
        m, f, fns = space.model, space.field, space.functions
        v = space.dim
        space.cache[key] = {(a, b): m.multiply(f, fns[a], fns[b]) for a in range(v) for b in range(a, v)}
    return space.cache[key]


def multiplication_matrix(space: SectionSpace, k: int) -> Matrix:
    """Matrix of Sym^k V -> H^0(kL); columns follow the monomial order of Sym^k."""
    if k not in (2, 3):
        raise ValueError("only degrees 2 and 3 are supported")
    key = f"mult{k}"
    if key in space.cache:
        return space.cache[key]
    m, f = space.model, space.field
    pairs = _pair_products(space)
    cols = []
    if k == 2:
        for ab in sym2_index(space.dim):
            cols.append(m.target_coords(f, pairs[ab], 2 * space.n))
    else:
        fns = space.functions
        for a, b, c in sym3_index(space.dim):
            cols.append(m.target_coords(f, m.multiply(f, pairs[(a, b)], fns[c]), 3 * space.n))
    mat = Matrix.from_columns(f, cols, len(cols[0]))
    space.cache[key] = mat
    return mat


def quadric_space(space: SectionSpace) -> QuadricSpace:
    """I(C)_2 for the embedding given by ``space``, as Gram matrices."""
    if space.dim < 3:
        raise DimensionFloor(f"section space of dimension {space.dim} < 3")
    key = "quadrics"
    if key not in space.cache:
        ker = kernel_basis(multiplication_matrix(space, 2))
        forms = tuple(QuadraticForm.from_flat(space.field, space.dim, col) for col in ker.columns())
        space.cache[key] = QuadricSpace(space.dim - 1, space.field, forms, space)
    return space.cache[key]


def quadric_dim(space: SectionSpace) -> int:
    """dim I(C)_2 from the rank of the multiplication map alone."""
    v = space.dim
    return v * (v + 1) // 2 - rank(multiplication_matrix(space, 2))


def cubic_space(space: SectionSpace) -> CubicSpace:
    """I(C)_3 in Sym^3 monomial coordinates."""
    if space.dim < 3:
        raise DimensionFloor(f"section space of dimension {space.dim} < 3")
    return CubicSpace(space.dim, space.field, kernel_basis(multiplication_matrix(space, 3)))


def times_linear(field: FieldSpec, n: int, quad_flat: Sequence, k: int, index3: dict) -> list:
    """Sym^3 coordinates of ``x_k * Q`` for Q given by flat Sym^2 coordinates."""
    out = [field.zero] * len(index3)
    for (i, j), c in zip(sym2_index(n), quad_flat):
        if c:
            pos = index3[tuple(sorted((i, j, k)))]
            out[pos] = field.add(out[pos], c)
    return out


def generated_in_degree_3(space: SectionSpace) -> GenerationReport:
    """Check that the products x_k * Q with Q in I_2 span I_3."""
    f = space.field
    n = space.dim
    qs = quadric_space(space)
    i3 = cubic_space(space)
    index3 = {t: i for i, t in enumerate(sym3_index(n))}
    span = IncrementalSpan(f, len(index3))
    for q in qs.flat_rows():
        for k in range(n):
            span.add(times_linear(f, n, q, k, index3))
            if span.dim == i3.dim:
                break
    deficit = i3.dim - span.dim
    return GenerationReport(deficit == 0, qs.dim, i3.dim, span.dim, deficit)


def membership(q: QuadraticForm, qs: QuadricSpace) -> bool:
    """True iff ``q`` lies in the span of ``qs.basis``."""
    if q.size != qs.nvars:
        raise DimensionMismatch(f"quadric in {q.size} variables vs space in {qs.nvars}")
    if q.field != qs.field:
        raise DimensionMismatch(f"quadric over {q.field} vs space over {qs.field}")
    span = IncrementalSpan(qs.field, qs.nvars * (qs.nvars + 1) // 2)
    for row in qs.flat_rows():
        span.add(row)
    return span.contains(q.flat())


def vanishes_on(space: SectionSpace, q: QuadraticForm) -> bool:
    """True iff ``q`` (in the coordinates of ``space``) maps to zero in H^0(2L)."""
    mult = multiplication_matrix(space, 2)
    vec = q.flat()
    if len(vec) != mult.ncols:
        raise DimensionMismatch("quadric does not match the section space")
    p = space.field.characteristic
    for row in mult.rows:
        s = sum(a * b for a, b in zip(row, vec) if a and b)
        if (s % p if p else s):
            return False
    return True
