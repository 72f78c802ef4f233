from fractions import Fraction
from math import comb

import pytest

from qr3 import (
    EllipticSmooth,
    FieldSpec,
    Matrix,
    QuadraticForm,
    RationalNormal,
    canonical_sections,
    generated_in_degree_3,
    membership,
    quadric_space,
)
from qr3.errors import DimensionMismatch
from qr3.ideal import cubic_space, expected_quadric_dim, quadric_dim, vanishes_on
from qr3.jsonio import quadric_space_from_dict, quadric_space_to_dict

Q = FieldSpec(0)
F13 = FieldSpec(13)


def catalecticant_minors(field, d):
    """The 2x2 minors x_i x_{j+1} - x_{i+1} x_j of the 2 x d Hankel matrix."""
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            terms = {}
            for key, c in (((i, j + 1), 1), ((i + 1, j), -1)):
                key = tuple(sorted(key))
                terms[key] = terms.get(key, 0) + c
            out.append(QuadraticForm.from_monomials(field, d + 1, terms))
    return out


@pytest.mark.parametrize("field", [Q, FieldSpec(7)])
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_rnc_quadrics_are_the_catalecticant_minors(field, d):
    qs = quadric_space(canonical_sections(RationalNormal(d), field, d))
    assert qs.dim == comb(d, 2)
    minors = catalecticant_minors(field, d)
    assert all(membership(m, qs) for m in minors)


@pytest.mark.parametrize("d", [4, 5, 6, 7])
def test_elliptic_quadrics_vanish_on_embedded_points(e01, d):
    space = canonical_sections(e01, F13, d)
    qs = quadric_space(space)
    assert qs.dim == expected_quadric_dim(d, 1) == comb(d - 1, 2) - 1
    pts = list(e01.enumerate_points(F13)[0])
    for p in pts:
        image = [e01.evaluate(F13, fn, p) for fn in space.functions]
        for q in qs.basis:
            assert q(image) == 0
    # infinity maps to the last coordinate vertex (highest pole order)
    vertex = [0] * (d - 1) + [1]
    assert all(q(vertex) == 0 for q in qs.basis)


def test_quadric_dim_agrees_with_kernel():
    for d in range(2, 8):
        space = canonical_sections(RationalNormal(d), FieldSpec(5), d)
        assert quadric_dim(space) == quadric_space(space).dim


def test_cubic_dimension_and_generation(e01):
    space = canonical_sections(RationalNormal(3), Q, 3)
    # dim Sym^3 of a 4-space minus h^0(O(9))
    assert cubic_space(space).dim == comb(6, 3) - 10
    rep = generated_in_degree_3(space)
    assert rep.generated and rep.deficit == 0 and rep.dim_i2 == 3
    ell = canonical_sections(e01, F13, 5)
    rep = generated_in_degree_3(ell)
    assert rep.generated and rep.dim_i3 == comb(7, 3) - 15


def test_membership_and_vanishing():
    space = canonical_sections(RationalNormal(3), Q, 3)
    qs = quadric_space(space)
    x0sq = QuadraticForm.from_monomials(Q, 4, {(0, 0): 1})
    assert not membership(x0sq, qs)
    assert not vanishes_on(space, x0sq)
    assert all(vanishes_on(space, q) for q in qs.basis)
    with pytest.raises(DimensionMismatch):
        membership(QuadraticForm.from_monomials(Q, 3, {(0, 0): 1}), qs)


def test_quadric_space_json_roundtrip():
    qs = quadric_space(canonical_sections(RationalNormal(4), Q, 4))
    data = quadric_space_to_dict(qs)
    assert data["checksum"] == {"ambient_dim": 4, "dim": 6, "ranks": qs.ranks()}
    back = quadric_space_from_dict(data)
    assert [q.gram for q in back.basis] == [q.gram for q in qs.basis]


def test_elliptic_over_q_matches_fp(e01):
    # Q-kernel reduced mod 13 spans the F_13 kernel
    q_space = quadric_space(canonical_sections(e01, Q, 5))
    f_space = quadric_space(canonical_sections(e01, F13, 5))
    for q in q_space.basis:
        rows = [[F13.convert(Fraction(int(x.numerator), int(x.denominator))) for x in r] for r in q.gram.rows]
        assert membership(QuadraticForm(Matrix.from_rows(F13, rows)), f_space)
