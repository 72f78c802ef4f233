import warnings
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qr3 import (
    INFINITY,
    AffinePoint,
    EllipticQuarticCuspidal,
    EllipticQuarticNodal,
    EllipticSmooth,
    FieldSpec,
    ProjectivePoint,
    RationalNormal,
    canonical_sections,
    eval_section,
    parse_curve,
    sample_points,
    section_product,
    vanishing_subspace,
)
from qr3.curves import PointShortfallWarning, format_point, parse_point, parse_points, singular_quartic_generators
from qr3.errors import (
    CurveSpecError,
    DegreeTooSmall,
    DimensionFloor,
    FieldError,
    PointAtInfinity,
    PointNotOnCurve,
    SingularPoint,
)

Q = FieldSpec(0)
F13 = FieldSpec(13)


def test_parse_curve_specs():
    model, d = parse_curve("rnc:5")
    assert isinstance(model, RationalNormal) and d == 5
    model, d = parse_curve("elliptic:a=0,b=1,d=6")
    assert isinstance(model, EllipticSmooth) and d == 6 and model.b == 1
    assert model.spec(6) == "elliptic:a=0,b=1,d=6"
    assert isinstance(parse_curve("nodal4")[0], EllipticQuarticNodal)
    assert isinstance(parse_curve("cusp4")[0], EllipticQuarticCuspidal)
    for bad in ("rnc:x", "elliptic:a=1,d=4", "quintic", "elliptic:a=1/0,b=1,d=4"):
        with pytest.raises(CurveSpecError):
            parse_curve(bad)


def test_point_encoding_roundtrip():
    for text in ("(1:3)", "(0:1)", "(2,3)", "inf"):
        assert format_point(F13, parse_point(F13, text)) == text
    assert parse_point(Q, "(2:4)") == ProjectivePoint.make(Q, 1, 2)
    assert parse_points(F13, "(0,1); inf") == [AffinePoint(0, 1), INFINITY]
    with pytest.raises(CurveSpecError):
        parse_point(F13, "0,1")


def test_elliptic_rejects_bad_fields(e01):
    with pytest.raises(FieldError):
        e01.check(FieldSpec(3))
    with pytest.raises(FieldError):
        EllipticSmooth(Fraction(-3), Fraction(2)).check(Q)  # x^3 - 3x + 2 has a double root


def test_elliptic_point_count_over_f13(e01):
    pts, finite = e01.enumerate_points(F13)
    pts = list(pts)
    brute = [(x, y) for x in range(13) for y in range(13) if (y * y - x**3 - 1) % 13 == 0]
    assert finite and len(pts) == len(brute) == 11  # plus the point at infinity
    assert all(e01.on_curve(F13, p) for p in pts)


def test_elliptic_points_over_q(e01):
    pts = list(e01.enumerate_points(Q)[0])
    assert {format_point(Q, p) for p in pts} == {"(0,1)", "(0,-1)", "(-1,0)", "(2,3)", "(2,-3)"}


def test_elliptic_basis_pole_orders(e01):
    space = canonical_sections(e01, F13, 4)
    fns = space.functions
    # 1, x, y, x^2
    assert fns[0] == ((1, 0, 0), (0,))
    assert fns[1] == ((0, 1, 0), (0,))
    assert fns[2] == ((0, 0, 0), (1,))
    assert fns[3] == ((0, 0, 1), (0,))


def test_y_squared_reduces_to_cubic(e01):
    space = canonical_sections(e01, F13, 3)
    y = [0, 0, 1]
    # y*y = x^3 + 1 has pole orders 6 and 0
    prod = section_product(y, y, space)
    assert prod == (1, 0, 0, 0, 0, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 7), st.data())
def test_section_product_commutes(n, data):
    e = EllipticSmooth(Fraction(2), Fraction(3))
    space = canonical_sections(e, F13, n)
    u = data.draw(st.lists(st.integers(0, 12), min_size=n, max_size=n))
    v = data.draw(st.lists(st.integers(0, 12), min_size=n, max_size=n))
    assert section_product(u, v, space) == section_product(v, u, space)
    pts = list(e.enumerate_points(F13)[0])
    for p in pts[:3]:
        uv = eval_section(u, p, space) * eval_section(v, p, space)
        w = section_product(u, v, space)
        big = canonical_sections(e, F13, 2 * n)
        assert eval_section(w, p, big) == uv


def test_rnc_evaluation_and_product():
    space = canonical_sections(RationalNormal(3), Q, 3)
    # s^3 - t^3 at (1:1)
    assert eval_section([1, 0, 0, -1], ProjectivePoint.make(Q, 1, 1), space) == 0
    assert eval_section([0, 0, 0, 1], ProjectivePoint.make(Q, 0, 1), space) == 1
    assert section_product([1, 1, 0, 0], [1, -1, 0, 0], space) == tuple(Q.convert(c) for c in (1, 0, -1, 0, 0, 0, 0))


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 8), st.fractions(min_value=-4, max_value=4, max_denominator=3))
def test_rnc_vanishing_subspace_is_divisible_by_linear_factor(d, c):
    space = canonical_sections(RationalNormal(d), Q, d)
    p = ProjectivePoint.make(Q, 1, c)
    sub = vanishing_subspace(space, p)
    twice = vanishing_subspace(sub, p)
    assert (sub.dim, twice.dim) == (d, d - 1)
    assert twice.degree == d - 2
    z = sympy.symbols("z")
    for col in twice.basis.columns():
        poly = sum(sympy.Rational(int(a.numerator), int(a.denominator)) * z**i for i, a in enumerate(col))
        if poly != 0:
            _, rem = sympy.div(poly, (z - sympy.Rational(c.numerator, c.denominator)) ** 2, z)
            assert rem == 0


def test_vanishing_at_infinity_and_two_torsion(e01):
    space = canonical_sections(e01, F13, 6)
    t = AffinePoint(12, 0)  # (-1, 0)
    assert e01.on_curve(F13, t)
    s1 = vanishing_subspace(space, t)
    s2 = vanishing_subspace(s1, t)
    assert (s1.dim, s2.dim) == (5, 4)
    for col in s1.basis.columns():
        assert eval_section(col, t, space) == 0
    inf = vanishing_subspace(space, INFINITY)
    # drops the top pole order: sections of 5*P_inf
    assert inf.dim == 5
    assert all(not col[5] for col in inf.basis.columns())


def test_vanishing_subspace_errors(e01):
    space = canonical_sections(e01, F13, 4)
    with pytest.raises(PointNotOnCurve):
        vanishing_subspace(space, AffinePoint(1, 1))
    low = vanishing_subspace(canonical_sections(RationalNormal(3), Q, 3), ProjectivePoint.make(Q, 1, 0))
    with pytest.raises(DimensionFloor):
        vanishing_subspace(low, ProjectivePoint.make(Q, 0, 1))
    nodal = canonical_sections(EllipticQuarticNodal(), Q, 4)
    with pytest.raises(SingularPoint):
        vanishing_subspace(nodal, ProjectivePoint.make(Q, 1, 1))
    with pytest.raises(PointAtInfinity):
        eval_section([1, 0, 0, 0], INFINITY, space)


def test_elliptic_degree_floor(e01):
    with pytest.raises(DegreeTooSmall):
        canonical_sections(e01, F13, 2)


def test_sample_points_deterministic_and_short(e01):
    a = sample_points(e01, F13, 3, seed=4)
    assert a == sample_points(e01, F13, 3, seed=4)
    assert a != sample_points(e01, F13, 3, seed=5)
    with pytest.warns(PointShortfallWarning):
        assert len(sample_points(e01, F13, 40)) == 11
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert len(sample_points(RationalNormal(4), Q, 9)) == 9


@pytest.mark.parametrize("model", [EllipticQuarticCuspidal(), EllipticQuarticNodal()])
def test_singular_quartic_generators_vanish_on_parametrization(model):
    q1, q2 = singular_quartic_generators(model, Q)
    for c in range(-5, 6):
        pt = model.image(Q, ProjectivePoint.make(Q, 1, c))
        assert q1(pt) == 0 and q2(pt) == 0
    assert str(q1) == "x0^2 + x1*x2"
