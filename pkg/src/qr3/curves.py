"""Curve models, their section spaces and the twists L(-p).

Every section space lives inside one ambient coordinate system:

* rational normal curves use the monomials ``s^(n-i) t^i`` of H^0(O(n));
* smooth Weierstrass curves ``y^2 = x^3 + a x + b`` use the pole-order basis
  of H^0(n*P_inf): ``1, x, y, x^2, x*y, ...`` (pole orders 0, 2, 3, 4, ...);
* the nodal and cuspidal quartics use the four coordinates of P^3, which are
  binary quartics of a fixed parametrization by P^1.

A section of a space is a coordinate vector in that ambient basis. Products
of sections are computed in the coordinate ring, so the kernel of the
multiplication map is the ideal of the image curve.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence, Union

from .errors import (
    CurveSpecError,
    DegreeTooSmall,
    DimensionFloor,
    DimensionMismatch,
    FieldError,
    PointAtInfinity,
    PointNotOnCurve,
    SingularPoint,
    WrongModel,
)
from .field import FieldSpec, Raw, Scalar
from .linalg import Matrix, kernel_basis, poly_mul
from .quadric import QuadraticForm

# -- points ----------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """A point ``(s:t)`` of P^1, normalized to ``(1:c)`` or ``(0:1)``."""

    s: Raw
    t: Raw

    @classmethod
    def make(cls, field: FieldSpec, s, t) -> "ProjectivePoint":
        s, t = field.convert(s), field.convert(t)
        if s:
            return cls(field.one, field.div(t, s))
        if t:
            return cls(field.zero, field.one)
        raise ValueError("(0:0) is not a point of P^1")


@dataclass(frozen=True)
class AffinePoint:
    x: Raw
    y: Raw


@dataclass(frozen=True)
class InfinityPoint:
    pass


INFINITY = InfinityPoint()

CurvePoint = Union[ProjectivePoint, AffinePoint, InfinityPoint]


def format_point(field: FieldSpec, p: CurvePoint) -> str:
    fmt = field.format_scalar
    if isinstance(p, ProjectivePoint):
        return f"({fmt(p.s)}:{fmt(p.t)})"
    if isinstance(p, AffinePoint):
        return f"({fmt(p.x)},{fmt(p.y)})"
    return "inf"


def parse_point(field: FieldSpec, text: str) -> CurvePoint:
    text = text.strip()
    if text == "inf":
        return INFINITY
    if not (text.startswith("(") and text.endswith(")")):
        raise CurveSpecError(f"bad point {text!r}")
    body = text[1:-1]
    try:
        if ":" in body:
            s, t = body.split(":")
            return ProjectivePoint.make(field, field.parse_scalar(s), field.parse_scalar(t))
        x, y = body.split(",")
        return AffinePoint(field.parse_scalar(x), field.parse_scalar(y))
    except (ValueError, FieldError) as exc:
        raise CurveSpecError(f"bad point {text!r}: {exc}") from None


def parse_points(field: FieldSpec, text: str) -> list[CurvePoint]:
    """Parse a ``;``-separated point list such as ``"(0,1);(2,3);inf"``."""
    return [parse_point(field, chunk) for chunk in text.split(";") if chunk.strip()]


class PointShortfallWarning(UserWarning):
    """Fewer rational points than requested were found."""


# -- helpers on coefficient lists ----------------------------------------------


def _taylor(field: FieldSpec, coeffs: Sequence[Raw], c: Raw, order: int) -> list:
    """First ``order`` Taylor coefficients of ``sum coeffs[i] z^i`` at ``z = c``."""
    out = []
    for k in range(order):
        total = field.zero
        for i in range(k, len(coeffs)):
            a = coeffs[i]
            if a:
                term = field.mul(field.convert(math.comb(i, k)), field.mul(a, field.power(c, i - k)))
                total = field.add(total, term)
        out.append(total)
    return out


def _poly_add(field: FieldSpec, f: Sequence[Raw], g: Sequence[Raw]) -> list:
    n = max(len(f), len(g))
    z = field.zero
    return [field.add(f[i] if i < len(f) else z, g[i] if i < len(g) else z) for i in range(n)]


def _poly_eval(field: FieldSpec, f: Sequence[Raw], x: Raw) -> Raw:
    acc = field.zero
    for c in reversed(f):
        acc = field.add(field.mul(acc, x), c)
    return acc


# -- models --------------------------------------------------------------------


class CurveModel:
    """Interface shared by all curve models."""

    genus: int

    def check(self, field: FieldSpec) -> None:
        pass

    def ambient_dim(self, n: int) -> int:
        raise NotImplementedError

    def to_function(self, field: FieldSpec, n: int, coords: Sequence[Raw]):
        raise NotImplementedError

    def multiply(self, field: FieldSpec, f, g):
        raise NotImplementedError

    def target_coords(self, field: FieldSpec, f, total: int) -> tuple:
        """Coordinates of a product of sections of total degree ``total``."""
        raise NotImplementedError

    def expansion(self, field: FieldSpec, n: int, f, point: CurvePoint, order: int) -> list:
        """Linear data whose first ``order`` entries vanish iff ``f`` vanishes to that order."""
        raise NotImplementedError

    def evaluate(self, field: FieldSpec, f, point: CurvePoint) -> Raw:
        raise NotImplementedError

    def on_curve(self, field: FieldSpec, point: CurvePoint) -> bool:
        raise NotImplementedError

    def is_singular(self, field: FieldSpec, point: CurvePoint) -> bool:
        return False

    def enumerate_points(self, field: FieldSpec) -> tuple[Iterator[CurvePoint], bool]:
        """Canonical point enumeration and whether it is finite."""
        raise NotImplementedError


class _P1Parametrized(CurveModel):
    """Functions are binary forms, coefficient of ``s^(N-i) t^i`` at index ``i``."""

    def multiply(self, field, f, g):
        return tuple(poly_mul(field, f, g))

    def _form_degree(self, n: int) -> int:
        return n

    def target_coords(self, field, f, total):
        size = self._form_degree(total) + 1
        if len(f) != size:
            raise DimensionMismatch(f"form of length {len(f)} in degree {total}")
        return tuple(f)

    def expansion(self, field, n, f, point, order):
        if not isinstance(point, ProjectivePoint):
            raise PointNotOnCurve(f"{point!r} is not a point of P^1")
        if not point.s:
            # local coordinate s at (0:1): coefficient of s^k is f[N-k]
            rev = list(reversed(f))
            return [rev[k] if k < len(rev) else field.zero for k in range(order)]
        return _taylor(field, f, point.t, order)

    def evaluate(self, field, f, point):
        if not isinstance(point, ProjectivePoint):
            raise PointNotOnCurve(f"{point!r} is not a point of P^1")
        if not point.s:
            return f[-1]
        return _poly_eval(field, f, point.t)

    def on_curve(self, field, point):
        return isinstance(point, ProjectivePoint)

    def enumerate_points(self, field):
        def gen():
            one, zero = field.one, field.zero
            yield ProjectivePoint(one, zero)
            yield ProjectivePoint(zero, one)
            yield ProjectivePoint(one, one)
            for c in itertools.count(2):
                if field.characteristic and c >= field.characteristic:
                    return
                yield ProjectivePoint(one, field.convert(c))

        pts = (p for p in gen() if not self.is_singular(field, p))
        return pts, bool(field.characteristic)


@dataclass(frozen=True)
class RationalNormal(_P1Parametrized):
    degree: int
    genus = 0

    def __post_init__(self) -> None:
        if self.degree < 2:
            raise DegreeTooSmall(f"rational normal curves need degree >= 2, got {self.degree}")

    def ambient_dim(self, n):
        return n + 1

    def to_function(self, field, n, coords):
        return tuple(coords)

    def spec(self, d: int | None = None) -> str:
        return f"rnc:{self.degree}"


# parametrizations of the singular quartics, coefficient of s^(4-i) t^i at i
_CUSP_PARAM = (
    (0, 0, 1, 0, 0),  # x0 = s^2 t^2
    (1, 0, 0, 0, 0),  # x1 = s^4
    (0, 0, 0, 0, -1),  # x2 = -t^4
    (0, 0, 0, 1, 0),  # x3 = s t^3
)
_NODE_PARAM = (
    (0, -1, 1, 0, 0),  # x0 = s^2 t (t - s)
    (1, 0, 0, 0, 0),  # x1 = s^4
    (0, 0, -1, 2, -1),  # x2 = -t^2 (t - s)^2
    (0, 1, -2, 1, 0),  # x3 = s t (t - s)^2
)


class _SingularQuartic(_P1Parametrized):
    genus = 1
    _param: tuple = ()
    _singular_params: tuple = ()
    name = ""

    def ambient_dim(self, n):
        return 4

    def _form_degree(self, n):
        return n

    def to_function(self, field, n, coords):
        out = [field.zero] * 5
        for c, form in zip(coords, self._param):
            if c:
                out = [field.add(o, field.mul(c, field.convert(v))) for o, v in zip(out, form)]
        return tuple(out)

    def is_singular(self, field, point):
        if not isinstance(point, ProjectivePoint):
            return False
        return any(point == ProjectivePoint.make(field, s, t) for s, t in self._singular_params)

    def image(self, field: FieldSpec, point: ProjectivePoint) -> tuple:
        """Coordinates in P^3 of the image of a parameter point."""
        return tuple(
            self.evaluate(field, tuple(field.convert(v) for v in form), point) for form in self._param
        )

    def spec(self, d: int | None = None) -> str:
        return self.name

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return f"{type(self).__name__}()"


class EllipticQuarticCuspidal(_SingularQuartic):
    _param = _CUSP_PARAM
    _singular_params = ((1, 0),)
    name = "cusp4"


class EllipticQuarticNodal(_SingularQuartic):
    _param = _NODE_PARAM
    _singular_params = ((1, 0), (1, 1))
    name = "nodal4"


def _pole_order(index: int) -> int:
    return 0 if index == 0 else index + 1


def _pole_index(order: int) -> int:
    return 0 if order == 0 else order - 1


@dataclass(frozen=True)
class EllipticSmooth(CurveModel):
    """``y^2 = x^3 + a x + b``; functions are pairs ``(A(x), B(x))`` meaning ``A + B*y``."""

    a: Fraction
    b: Fraction
    genus = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def cubic(self, field: FieldSpec) -> list:
        return [field.convert(self.b), field.convert(self.a), field.zero, field.one]

    def discriminant(self, field: FieldSpec) -> Raw:
        a, b = field.convert(self.a), field.convert(self.b)
        return field.mul(field.convert(-16), field.add(field.mul(4, a * a * a), field.mul(27, b * b)))

    def check(self, field):
        if field.characteristic == 3:
            raise FieldError("short Weierstrass models need characteristic other than 2 and 3")
        if not self.discriminant(field):
            raise FieldError(f"y^2 = x^3 + {self.a}x + {self.b} is singular over {field}")

    def ambient_dim(self, n):
        return n

    def to_function(self, field, n, coords):
        z = field.zero
        A = [z] * (n // 2 + 1)
        B = [z] * max(1, (n - 3) // 2 + 1)
        for idx, c in enumerate(coords):
            k = _pole_order(idx)
            if k % 2 == 0:
                A[k // 2] = c
            else:
                B[(k - 3) // 2] = c
        return tuple(A), tuple(B)

    def multiply(self, field, f, g):
        (a1, b1), (a2, b2) = f, g
        A = _poly_add(field, poly_mul(field, a1, a2), poly_mul(field, poly_mul(field, b1, b2), self.cubic(field)))
        B = _poly_add(field, poly_mul(field, a1, b2), poly_mul(field, a2, b1))
        return tuple(A), tuple(B)

    def target_coords(self, field, f, total):
        A, B = f
        out = [field.zero] * total
        for i, c in enumerate(A):
            if c:
                k = 2 * i
                if k > total:
                    raise DimensionMismatch(f"pole order {k} exceeds {total}")
                out[_pole_index(k)] = c
        for i, c in enumerate(B):
            if c:
                k = 2 * i + 3
                if k > total:
                    raise DimensionMismatch(f"pole order {k} exceeds {total}")
                out[_pole_index(k)] = c
        return tuple(out)

    def _y_series(self, field: FieldSpec, x0: Raw, y0: Raw, order: int) -> list:
        g = _taylor(field, self.cubic(field), x0, order)
        ys = [y0]
        inv = field.inv(field.mul(2, y0))
        for k in range(1, order):
            s = field.zero
            for i in range(1, k):
                s = field.add(s, field.mul(ys[i], ys[k - i]))
            ys.append(field.mul(field.sub(g[k], s), inv))
        return ys

    def expansion(self, field, n, f, point, order):
        A, B = f
        if isinstance(point, InfinityPoint):
            coords = self.target_coords(field, f, n)
            # vanishing order m at P_inf means pole order <= n - m
            return [coords[_pole_index(n - k)] if n - k != 1 else field.zero for k in range(order)]
        if not isinstance(point, AffinePoint):
            raise PointNotOnCurve(f"{point!r} is not a Weierstrass point")
        x0, y0 = point.x, point.y
        if not y0:
            # x - x0 has order 2 and y order 1 at a 2-torsion point
            ta = _taylor(field, A, x0, order)
            tb = _taylor(field, B, x0, order)
            return [ta[k // 2] if k % 2 == 0 else tb[k // 2] for k in range(order)]
        ta = _taylor(field, A, x0, order)
        tb = _taylor(field, B, x0, order)
        ys = self._y_series(field, x0, y0, order)
        out = []
        for k in range(order):
            s = ta[k]
            for i in range(k + 1):
                if tb[i] and ys[k - i]:
                    s = field.add(s, field.mul(tb[i], ys[k - i]))
            out.append(s)
        return out

    def evaluate(self, field, f, point):
        if isinstance(point, InfinityPoint):
            raise PointAtInfinity("sections cannot be evaluated at the point at infinity")
        if not isinstance(point, AffinePoint):
            raise PointNotOnCurve(f"{point!r} is not a Weierstrass point")
        A, B = f
        return field.add(_poly_eval(field, A, point.x), field.mul(_poly_eval(field, B, point.x), point.y))

    def on_curve(self, field, point):
        if isinstance(point, InfinityPoint):
            return True
        if not isinstance(point, AffinePoint):
            return False
        return field.mul(point.y, point.y) == _poly_eval(field, self.cubic(field), point.x)

    def enumerate_points(self, field, bound: int = 200):
        cubic = self.cubic(field)
        p = field.characteristic
        if p:
            roots: dict[int, list[int]] = {}
            for y in range(p):
                roots.setdefault(y * y % p, []).append(y)
            pts = [AffinePoint(x, y) for x in range(p) for y in roots.get(_poly_eval(field, cubic, x), [])]
            return iter(pts), True
        pts = []
        for x in itertools.chain([0], *((k, -k) for k in range(1, bound + 1))):
            x = field.convert(x)
            v = _poly_eval(field, cubic, x)
            if v < 0:
                continue
            num, den = int(v.numerator), int(v.denominator)
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                y = field.convert(Fraction(rn, rd))
                pts.append(AffinePoint(x, y))
                if y:
                    pts.append(AffinePoint(x, -y))
        return iter(pts), True

    def spec(self, d: int | None = None) -> str:
        def s(v: Fraction) -> str:
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

        return f"elliptic:a={s(self.a)},b={s(self.b)},d={d}"


# -- curve spec strings --------------------------------------------------------


def parse_curve(text: str) -> tuple[CurveModel, int]:
    """Parse ``rnc:<d>``, ``elliptic:a=<s>,b=<s>,d=<n>``, ``nodal4`` or ``cusp4``."""
    text = text.strip()
    try:
        if text.startswith("rnc:"):
            d = int(text[4:])
            return RationalNormal(d), d
        if text == "nodal4":
            return EllipticQuarticNodal(), 4
        if text == "cusp4":
            return EllipticQuarticCuspidal(), 4
        if text.startswith("elliptic:"):
            parts = dict(kv.split("=", 1) for kv in text[len("elliptic:"):].split(","))
            if set(parts) != {"a", "b", "d"}:
                raise ValueError("need exactly a=, b= and d=")
            d = int(parts["d"])
            return EllipticSmooth(Fraction(parts["a"]), Fraction(parts["b"])), d
    except (ValueError, ZeroDivisionError) as exc:
        raise CurveSpecError(f"bad curve spec {text!r}: {exc}") from None
    raise CurveSpecError(f"unknown curve spec {text!r}; expected rnc:<d>, elliptic:a=..,b=..,d=.., nodal4 or cusp4")


# -- section spaces ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SectionSpace:
    """A subspace of H^0(L) for the baseline bundle of degree ``n``.

    ``basis`` columns are sections in the ambient coordinates;
    ``subtracted`` lists the points removed so far (with repetition), and
    ``inclusion`` expresses this basis in the parent's basis when the space
    came from :func:`vanishing_subspace`.
    """

    model: CurveModel
    field: FieldSpec
    n: int
    basis: Matrix
    subtracted: tuple = ()
    inclusion: Matrix | None = None
    cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.basis.ncols

    @property
    def degree(self) -> int:
        return self.n - len(self.subtracted)

    @property
    def genus(self) -> int:
        return self.model.genus

    @cached_property
    def functions(self) -> list:
        return [self.model.to_function(self.field, self.n, col) for col in self.basis.columns()]

    def function_of(self, coords: Sequence) -> object:
        """Function represented by a coordinate vector in this space's own basis."""
        f = self.field
        amb = [f.zero] * self.basis.nrows
        for c, col in zip(coords, self.basis.columns()):
            c = f.convert(c)
            if c:
                amb = [f.add(x, f.mul(c, y)) for x, y in zip(amb, col)]
        return self.model.to_function(self.field, self.n, amb)


def canonical_sections(model: CurveModel, field: FieldSpec, n: int | None = None) -> SectionSpace:
    """The full space H^0(L) in its canonical ordered basis."""
    if isinstance(model, RationalNormal):
        if n is None:
            n = model.degree
        if n != model.degree:
            raise DimensionMismatch(f"rnc:{model.degree} is embedded by O({model.degree}), not O({n})")
    elif isinstance(model, _SingularQuartic):
        if n is None:
            n = 4
        if n != 4:
            raise DegreeTooSmall(f"{model.name} only exists in degree 4")
    elif isinstance(model, EllipticSmooth):
        if n is None or n < 3:
            raise DegreeTooSmall(f"elliptic section spaces need n >= 3, got {n}")
    model.check(field)
    dim = model.ambient_dim(n)
    return SectionSpace(model, field, n, Matrix.identity(field, dim))


def _as_raw(field: FieldSpec, vec: Sequence) -> list:
    return [field.convert(x) for x in vec]


def section_product(u: Sequence, v: Sequence, space: SectionSpace) -> tuple:
    """Product of two sections given in the ambient basis of H^0(n).

    The result is the coordinate vector in the canonical basis of the degree
    ``2n`` space (binary forms of degree 2n, or H^0(2n*P_inf)).
    """
    f = space.field
    m = space.model
    fu = m.to_function(f, space.n, _as_raw(f, u))
    fv = m.to_function(f, space.n, _as_raw(f, v))
    return m.target_coords(f, m.multiply(f, fu, fv), 2 * space.n)


def eval_section(u: Sequence, p: CurvePoint, space: SectionSpace) -> Scalar:
    """Value of the section ``u`` (ambient coordinates) at ``p``."""
    f = space.field
    m = space.model
    if isinstance(p, InfinityPoint):
        raise PointAtInfinity("sections cannot be evaluated at the point at infinity")
    if not m.on_curve(f, p):
        raise PointNotOnCurve(f"{format_point(f, p)} is not on the curve")
    return Scalar(f, m.evaluate(f, m.to_function(f, space.n, _as_raw(f, u)), p))


def vanishing_subspace(space: SectionSpace, p: CurvePoint) -> SectionSpace:
    """Sections of ``space`` that additionally vanish at ``p``, i.e. H^0(L(-p)).

    A point that was already subtracted is imposed to one higher order of
    vanishing, so ``L(-p-p)`` is supported as well.
    """
    f = space.field
    m = space.model
    if not m.on_curve(f, p):
        raise PointNotOnCurve(f"{format_point(f, p)} is not on the curve")
    if m.is_singular(f, p):
        raise SingularPoint(f"{format_point(f, p)} is a singular point")
    if space.dim - 1 < 3:
        raise DimensionFloor(f"H^0(L(-p)) would have dimension {space.dim - 1} < 3")
    order = space.subtracted.count(p) + 1
    rows = [m.expansion(f, space.n, fn, p, order) for fn in space.functions]
    conditions = Matrix._raw(f, zip(*rows), space.dim)
    if any(any(r) for r in conditions.rows[:-1]):
        raise AssertionError("subtracted points no longer vanish on the basis")
    k = kernel_basis(Matrix._raw(f, [conditions.rows[-1]], space.dim))
    if k.ncols != space.dim - 1:
        raise AssertionError(f"{format_point(f, p)} imposes no condition on the sections")
    return SectionSpace(m, f, space.n, space.basis @ k, space.subtracted + (p,), k)


def sample_points(model: CurveModel, field: FieldSpec, count: int, seed: int = 0) -> list[CurvePoint]:
    """Deterministic smooth rational points, rotated by ``seed``.

    Emits :class:`PointShortfallWarning` when fewer than ``count`` exist.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    pts, finite = model.enumerate_points(field)
    if finite:
        pool = list(pts)
        if pool:
            off = seed % len(pool)
            pool = pool[off:] + pool[:off]
        out = pool[:count]
    else:
        out = list(itertools.islice(pts, seed, seed + count))
    if len(out) < count:
        warnings.warn(
            f"only {len(out)} of {count} rational points available over {field}",
            PointShortfallWarning,
            stacklevel=2,
        )
    return out


def singular_quartic_generators(model: CurveModel, field: FieldSpec | None = None) -> tuple[QuadraticForm, QuadraticForm]:
    """The two defining quadrics of the cuspidal or nodal quartic."""
    field = field or FieldSpec.rationals()
    if isinstance(model, EllipticQuarticCuspidal):
        q2 = {(3, 3): 1, (0, 2): 1}
    elif isinstance(model, EllipticQuarticNodal):
        q2 = {(3, 3): 1, (0, 2): 1, (0, 3): 1}
    else:
        raise WrongModel(f"{model!r} is not a singular elliptic quartic")
    q1 = {(0, 0): 1, (1, 2): 1}
    return QuadraticForm.from_monomials(field, 4, q1), QuadraticForm.from_monomials(field, 4, q2)
