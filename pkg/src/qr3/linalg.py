"""Dense exact linear algebra over Q and F_p.

Everything here works on raw field values (see :mod:`qr3.field`). Pivoting is
always "first nonzero entry in column order", so echelon forms, kernel bases
and everything built on them are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import divisors

from .errors import DimensionMismatch, NonSymmetric, ZeroForm
from .field import FieldSpec, Raw, Scalar


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        conv = field.convert
        data = tuple(tuple(conv(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(row) != ncols for row in data):
            raise DimensionMismatch("ragged rows")
        return cls(field, data, ncols)

    @classmethod
    def _raw(cls, field: FieldSpec, rows: Iterable[Sequence], ncols: int) -> "Matrix":
        # rows already hold canonical raw values
        return cls(field, tuple(tuple(r) for r in rows), ncols)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, nrows, 0)
        return cls._raw(field, zip(*columns), len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Raw:
        i, j = ij
        return self.rows[i][j]

    def scalar(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.rows[i][j])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix.zeros(self.field, self.ncols, 0)
        return Matrix(self.field, tuple(zip(*self.rows)), self.nrows)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def _check(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise DimensionMismatch(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.characteristic
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        zero = self.field.zero
        out = []
        for row in self.rows:
            nz = [(k, a) for k, a in enumerate(row) if a]
            new = []
            for col in cols:
                s = zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        s += a * b
                new.append(s % p if p else s)
            out.append(tuple(new))
        return Matrix(self.field, tuple(out), other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        add = self.field.add
        return Matrix(
            self.field,
            tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def scale(self, c: Raw) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, tuple(tuple(mul(c, a) for a in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def to_strings(self) -> list[list[str]]:
        fmt = self.field.format_scalar
        return [[fmt(x) for x in row] for row in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(r) for r in self.to_strings())
        return f"Matrix<{self.field}>[{body}]"


# -- elimination ---------------------------------------------------------------


def _rref_inplace(a: list[list], ncols: int, p: int) -> list[int]:
    """Reduce the row list ``a`` in place; return the pivot columns."""
    pivots: list[int] = []
    nrows = len(a)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        row = a[r]
        lead = row[c]
        if p:
            inv = pow(lead, -1, p)
            if inv != 1:
                row = [x * inv % p for x in row]
        elif lead != 1:
            row = [x / lead for x in row]
        a[r] = row
        nz = [(j, y) for j, y in enumerate(row) if y and j >= c]
        for i in range(nrows):
            if i == r:
                continue
            other = a[i]
            f = other[c]
            if not f:
                continue
            other = list(other)
            if p:
                for j, y in nz:
                    other[j] = (other[j] - f * y) % p
            else:
                for j, y in nz:
                    other[j] = other[j] - f * y
            a[i] = other
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns of ``m``."""
    a = [list(r) for r in m.rows]
    pivots = _rref_inplace(a, m.ncols, m.field.characteristic)
    return Matrix._raw(m.field, a, m.ncols), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def rank_of_rows(field: FieldSpec, rows: Sequence[Sequence[Raw]], ncols: int) -> int:
    a = [list(r) for r in rows]
    return len(_rref_inplace(a, ncols, field.characteristic))


def kernel_basis(m: Matrix) -> Matrix:
    """Right null space of ``m`` as the columns of the returned matrix.

    Free variables are set to unit vectors in increasing column order, so the
    basis is canonical.
    """
    field = m.field
    red, r, pivots = rref(m)
    n = m.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    zero, one = field.zero, field.one
    neg = field.neg
    cols = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = neg(red.rows[i][f])
        cols.append(v)
    return Matrix.from_columns(field, cols, n)


def determinant(m: Matrix) -> Raw:
    """Determinant by elimination."""
    if m.nrows != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    field = m.field
    p = field.characteristic
    a = [list(r) for r in m.rows]
    n = len(a)
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = field.neg(det)
        lead = a[c][c]
        det = field.mul(det, lead)
        inv = field.inv(lead)
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f = field.mul(f, inv)
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[c])]
    return det % p if p else det


class IncrementalSpan:
    """Echelon basis that grows one vector at a time.

    ``add`` reduces the new vector against the rows kept so far and keeps it
    iff it is independent, which gives greedy "first spanning subset" selection.
    """

    def __init__(self, field: FieldSpec, length: int):
        self.field = field
        self.length = length
        self._rows: list[tuple[int, list]] = []  # (pivot column, normalized row)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence[Raw]) -> list:
        p = self.field.characteristic
        v = list(vec)
        for c, row in self._rows:
            f = v[c]
            if f:
                if p:
                    v = [(x - f * y) % p for x, y in zip(v, row)]
                else:
                    v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, vec: Sequence[Raw]) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec: Sequence[Raw]) -> bool:
        if len(vec) != self.length:
            raise DimensionMismatch(f"vector of length {len(vec)} in span of length {self.length}")
        v = self.reduce(vec)
        c = next((j for j, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = self.field.inv(v[c])
        self._rows.append((c, [self.field.mul(x, inv) for x in v]))
        return True


# -- symmetric forms -----------------------------------------------------------


def symmetric_rank(q: Matrix) -> tuple[int, Matrix]:
    """Rank of a symmetric matrix together with a diagonalizing congruence.

    Returns ``(rank, P)`` with ``P`` invertible and ``P.T @ q @ P`` diagonal.
    Requires odd characteristic, which every :class:`FieldSpec` guarantees.
    """
    if not q.is_symmetric():
        raise NonSymmetric("Gram matrix is not symmetric")
    field = q.field
    n = q.nrows
    a = [list(r) for r in q.rows]
    P = [list(r) for r in Matrix.identity(field, n).rows]
    add, sub, mul = field.add, field.sub, field.mul

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    def add_multiple(dst: int, src: int, f: Raw) -> None:
        # basis vector dst += f * basis vector src, i.e. congruence by E
        a[dst] = [add(x, mul(f, y)) for x, y in zip(a[dst], a[src])]
        for row in a:
            row[dst] = add(row[dst], mul(f, row[src]))
        for row in P:
            row[dst] = add(row[dst], mul(f, row[src]))

    for k in range(n):
        if not a[k][k]:
            j = next((j for j in range(k + 1, n) if a[j][j]), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j]), None)
                if j is None:
                    continue
                # a[k][k] becomes 2*a[k][j] != 0 since char != 2
                add_multiple(k, j, field.one)
        inv = field.inv(a[k][k])
        for j in range(k + 1, n):
            if a[k][j]:
                add_multiple(j, k, field.neg(mul(a[k][j], inv)))

    r = sum(1 for k in range(n) if a[k][k])
    check = rank(q)
    if r != check:
        raise AssertionError(f"symmetric rank {r} disagrees with row rank {check}")
    return r, Matrix._raw(field, P, n)


# -- binary forms --------------------------------------------------------------


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous polynomial in two variables.

    ``coeffs[i]`` is the coefficient of ``s**(degree - i) * t**i``; for pencils
    read ``(s, t)`` as ``(lambda, mu)``.
    """

    field: FieldSpec
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, s: Raw, t: Raw) -> Raw:
        f = self.field
        d = self.degree
        total = f.zero
        for i, c in enumerate(self.coeffs):
            if c:
                total = f.add(total, f.mul(c, f.mul(f.power(s, d - i), f.power(t, i))))
        return total

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        return BinaryForm(self.field, tuple(poly_mul(self.field, self.coeffs, other.coeffs)))

    def __str__(self) -> str:
        d = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in (("s", d - i), ("t", i)) if e
            )
            cs = self.field.format_scalar(c)
            terms.append(mono if cs == "1" and mono else f"{cs}*{mono}" if mono else cs)
        return " + ".join(terms) or "0"


def poly_mul(field: FieldSpec, f: Sequence[Raw], g: Sequence[Raw]) -> list:
    """Coefficient convolution."""
    p = field.characteristic
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] += a * b
    if p:
        out = [x % p for x in out]
    return out


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_pencil(q1: Matrix, q2: Matrix) -> BinaryForm:
    """``det(lambda*q1 + mu*q2)`` as a binary form in ``(lambda, mu)``.

    Exact Leibniz expansion over linear binary forms; intended for the 4x4
    pencils of elliptic quartics but valid for any small square size.
    """
    if q1.field != q2.field:
        raise DimensionMismatch("pencil members over different fields")
    if q1.shape != q2.shape or q1.nrows != q1.ncols:
        raise DimensionMismatch("pencil members must be square of equal size")
    field = q1.field
    n = q1.nrows
    total = [field.zero] * (n + 1)
    for perm in itertools.permutations(range(n)):
        term: list = [field.one]
        for i, j in enumerate(perm):
            entry = (q1.rows[i][j], q2.rows[i][j])
            if not any(entry):
                term = []
                break
            term = poly_mul(field, term, entry)
        if not term:
            continue
        if _permutation_sign(perm) < 0:
            term = [field.neg(c) for c in term]
        total = [field.add(a, b) for a, b in zip(total, term)]
    return BinaryForm(field, tuple(total))


@dataclass(frozen=True)
class Root:
    """A root ``(lam : mu)`` of a binary form, normalized to ``(1 : c)`` or ``(0 : 1)``."""

    lam: Raw
    mu: Raw
    multiplicity: int


def _synthetic_divide(field: FieldSpec, h: list, c: Raw) -> tuple[list, Raw]:
    # h[i] is the coefficient of z**i; divide by (z - c)
    n = len(h) - 1
    q = [field.zero] * n
    acc = field.zero
    for i in range(n, 0, -1):
        acc = field.add(h[i], field.mul(acc, c))
        q[i - 1] = acc
    rem = field.add(h[0], field.mul(acc, c))
    return q, rem


def _root_multiplicity(field: FieldSpec, h: list, c: Raw) -> tuple[int, list]:
    mult = 0
    while len(h) > 1:
        q, rem = _synthetic_divide(field, h, c)
        if rem:
            break
        mult += 1
        h = q
    return mult, h


def _rational_candidates(field: FieldSpec, h: list) -> list:
    den = 1
    for c in h:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in h]
    lo = next(x for x in ints if x)
    hi = next(x for x in reversed(ints) if x)
    cands = {Fraction(0)} if ints[0] == 0 else set()
    for u in divisors(abs(lo)):
        for v in divisors(abs(hi)):
            cands.add(Fraction(u, v))
            cands.add(Fraction(-u, v))
    return [field.convert(c) for c in sorted(cands)]


def binary_form_roots(f: BinaryForm) -> list[Root]:
    """Field-rational roots of ``f`` with multiplicities.

    Over F_p every point of P^1(F_p) is tried. Over Q the rational root
    theorem bounds the search. Order: ``(0:1)`` first, then ``(1:c)`` by
    ascending ``c``.
    """
    if f.is_zero():
        raise ZeroForm("the zero form has every point as a root")
    field = f.field
    d = f.degree
    # dehomogenize at lam = 1: h(z) = f(1, z), coefficient of z**i is coeffs[i]
    h = list(f.coeffs)
    while len(h) > 1 and not h[-1]:
        h.pop()
    roots: list[Root] = []
    top = d - (len(h) - 1)
    if top:
        roots.append(Root(field.zero, field.one, top))
    if field.characteristic:
        cands = list(field.elements())
    else:
        cands = _rational_candidates(field, h) if len(h) > 1 else []
    for c in cands:
        if len(h) == 1:
            break
        m, h = _root_multiplicity(field, h, c)
        if m:
            roots.append(Root(field.one, c, m))
    return roots
