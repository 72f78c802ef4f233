"""Rank-3 certificates for I(C)_2 and their independent verification.

Two constructions produce rank-3 quadrics:

* elliptic quartics: the pencil I(C)_2 = <Q1, Q2> meets the quartic
  hypersurface of rank <= 3 quadrics where det(lam*Q1 + mu*Q2) vanishes;
* higher degree: for three points p_i the cones over the projections from
  p_i have quadrics pulled back from the curve embedded by L(-p_i). Any two
  cones span a hyperplane of I(C)_2 and the third one fills it, so
  certificates for the three projections certify the curve itself.

The recursion bottoms out at the conic (genus 0, degree 2) or at an elliptic
quartic (genus 1, degree 4).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass, field as dc_field
from typing import Sequence

from .curves import (
    INFINITY,
    CurveModel,
    CurvePoint,
    EllipticSmooth,
    RationalNormal,
    SectionSpace,
    _SingularQuartic,
    canonical_sections,
    format_point,
    parse_curve,
    singular_quartic_generators,
    vanishing_subspace,
)
from .errors import (
    CapExceeded,
    DegreeTooSmall,
    DimensionMismatch,
    FieldError,
    InclusionMismatch,
    InsufficientPoints,
    InsufficientRationalRoots,
    MathDiagnostic,
    NotAPencil,
    PointNotOnCurve,
    PointsNotDistinct,
    Qr3Error,
    SpanningFailure,
    UnexpectedRank,
    WrongModel,
)
from .field import FieldSpec
from .ideal import (
    expected_quadric_dim,
    generated_in_degree_3,
    membership,
    quadric_dim,
    quadric_space,
    vanishes_on,
)
from .linalg import IncrementalSpan, Matrix, _rref_inplace, binary_form_roots, det_pencil, kernel_basis
from .quadric import QuadraticForm

ENGINE_VERSION = "qr3-0.1.0"

log = logging.getLogger(__name__)


@dataclass
class Qr3Certificate:
    field: FieldSpec
    curve: str
    degree: int
    ambient_dim: int
    quadrics: list
    trace: dict
    target_dim: int
    engine_version: str = ENGINE_VERSION

    @property
    def ranks(self) -> list[int]:
        return [q.rank for q in self.quadrics]


# -- cones ---------------------------------------------------------------------


def cone_pullback(child, parent: SectionSpace, p: CurvePoint, child_space: SectionSpace | None = None) -> list[QuadraticForm]:
    """Pull quadrics of the projection from ``p`` back to the cone in the parent.

    ``child`` is a certificate or a list of forms written in the basis of
    ``vanishing_subspace(parent, p)``. Every result is checked to vanish on the
    parent curve.
    """
    forms = child.quadrics if isinstance(child, Qr3Certificate) else list(child)
    if child_space is None:
        child_space = vanishing_subspace(parent, p)
    inc = child_space.inclusion
    out = []
    for q in forms:
        if q.size != inc.ncols:
            raise DimensionMismatch(f"child quadric in {q.size} variables, projection has {inc.ncols}")
        pulled = q.pullback(inc)
        if "rank" in q.__dict__:
            # rank is preserved by an injective coordinate inclusion
            pulled.__dict__["rank"] = q.rank
        if not vanishes_on(parent, pulled):
            raise InclusionMismatch(
                f"pullback through {format_point(parent.field, p)} is not in I(C)_2 of the parent"
            )
        out.append(pulled)
    return out


# -- the elliptic quartic pencil ------------------------------------------------


def _pencil(space: SectionSpace) -> tuple[list[QuadraticForm], dict]:
    qs = quadric_space(space)
    if qs.dim != 2:
        raise NotAPencil(f"I(C)_2 has dimension {qs.dim}, not 2")
    field = space.field
    q1, q2 = qs.basis
    det = det_pencil(q1.gram, q2.gram)
    if det.is_zero():
        raise UnexpectedRank("every member of the pencil is singular; the curve is not smooth")
    fmt = field.format_scalar
    roots = []
    candidates = []
    for root in binary_form_roots(det):
        form = QuadraticForm(q1.gram.scale(root.lam) + q2.gram.scale(root.mu))
        if form.rank != 3:
            raise UnexpectedRank(
                f"pencil member at ({fmt(root.lam)}:{fmt(root.mu)}) has rank {form.rank}, not 3"
            )
        label = f"({fmt(root.lam)}:{fmt(root.mu)})"
        roots.append({"root": label, "multiplicity": root.multiplicity, "rank": form.rank})
        candidates.append((label, form))
    if len(candidates) < 2:
        raise InsufficientRationalRoots(
            f"det(lam*Q1 + mu*Q2) = {det} has {len(candidates)} distinct root(s) over {field}; "
            "try another prime"
        )
    span = IncrementalSpan(field, len(q1.flat()))
    kept, forms = [], []
    for label, form in candidates:
        if span.add(form.flat()):
            kept.append(label)
            forms.append(form)
        if span.dim == 2:
            break
    trace = {
        "kind": "pencil",
        "det": [fmt(c) for c in det.coeffs],
        "roots": roots,
        "kept": kept,
    }
    return forms, trace


def pencil_certificate(space: SectionSpace) -> Qr3Certificate:
    """Certificate for an elliptic quartic from the rational roots of its pencil."""
    forms, trace = _pencil(space)
    trace["subtracted"] = [format_point(space.field, p) for p in space.subtracted]
    return Qr3Certificate(
        field=space.field,
        curve=space.model.spec(space.n),
        degree=space.degree,
        ambient_dim=space.dim - 1,
        quadrics=forms,
        trace=trace,
        target_dim=2,
    )


# -- the recursion -------------------------------------------------------------


def _rotate(pool: list, seed: int) -> list:
    if not pool:
        return pool
    off = seed % len(pool)
    return pool[off:] + pool[:off]


def candidate_pool(model: CurveModel, field: FieldSpec, degree: int, seed: int = 0) -> list[CurvePoint]:
    """All points the recursion may use as cone vertices, in preference order."""
    pts, finite = model.enumerate_points(field)
    if finite:
        pool = _rotate(list(pts), seed)
    else:
        pool = list(itertools.islice(pts, seed, seed + degree + 3))
    if isinstance(model, EllipticSmooth):
        pool.append(INFINITY)
    return pool


def _ordered_candidates(space: SectionSpace, pool: Sequence[CurvePoint]) -> list[CurvePoint]:
    # fresh points first; repeated points are imposed to higher order
    usable = [p for p in pool if not space.model.is_singular(space.field, p)]
    return sorted(usable, key=space.subtracted.count)


def _certify(space: SectionSpace, pool: Sequence[CurvePoint]) -> tuple[list[QuadraticForm], dict]:
    g, d = space.genus, space.degree
    field = space.field
    if g == 0 and d == 2:
        qs = quadric_space(space)
        if qs.dim != 1 or qs.basis[0].rank != 3:
            raise AssertionError("the conic base case must be a single rank-3 quadric")
        return list(qs.basis), {"kind": "conic_base"}
    if g == 1 and d == 4:
        return _pencil(space)

    cones, rejected = [], []
    for p in _ordered_candidates(space, pool):
        if len(cones) == 3:
            break
        label = format_point(field, p)
        child = vanishing_subspace(space, p)
        try:
            forms, child_trace = _certify(child, pool)
        except MathDiagnostic as exc:
            log.debug("degree %d: point %s rejected: %s", d, label, exc)
            rejected.append({"point": label, "reason": type(exc).__name__})
            continue
        cones.append((label, cone_pullback(forms, space, p, child_space=child), child_trace))

    if len(cones) < 3:
        if not rejected:
            raise InsufficientPoints(f"degree {d}: only {len(cones)} usable point(s) over {field}")
        reasons = ", ".join(f"{r['point']}: {r['reason']}" for r in rejected)
        if any(r["reason"] == "InsufficientRationalRoots" for r in rejected):
            raise InsufficientRationalRoots(f"degree {d}: only {len(cones)} cone(s) certified ({reasons})")
        raise InsufficientPoints(f"degree {d}: only {len(cones)} cone(s) certified ({reasons})")

    target = quadric_dim(space)
    formula = expected_quadric_dim(d, g)
    dims = {"i2": target, "formula": formula}
    if target != formula:
        raise SpanningFailure(f"degree {d}: dim I(C)_2 = {target} but the formula gives {formula}", dims)

    length = len(cones[0][1][0].flat())
    pair_dims = []
    for i, j in itertools.combinations(range(3), 2):
        span = IncrementalSpan(field, length)
        for q in cones[i][1] + cones[j][1]:
            span.add(q.flat())
        pair_dims.append(span.dim)
    dims["pairs"] = pair_dims
    if any(pd != target - 1 for pd in pair_dims):
        raise SpanningFailure(
            f"degree {d}: pairs of cones span {pair_dims}, expected {target - 1} each", dims
        )

    span = IncrementalSpan(field, length)
    quadrics, kept = [], []
    for ci, (_, forms, _) in enumerate(cones):
        for qi, q in enumerate(forms):
            if span.add(q.flat()):
                quadrics.append(q)
                kept.append([ci, qi])
    dims["union"] = span.dim
    if span.dim != target:
        raise SpanningFailure(f"degree {d}: three cones span {span.dim} of {target}", dims)

    trace = {
        "kind": "cone_step",
        "degree": d,
        "dims": dims,
        "cones": [{"point": label, "child": ct} for label, _, ct in cones],
        "kept": kept,
    }
    if rejected:
        trace["rejected"] = rejected
    return quadrics, trace


def build_certificate(
    model: CurveModel,
    field: FieldSpec,
    d: int | None = None,
    seed: int = 0,
    points: Sequence[CurvePoint] | None = None,
) -> Qr3Certificate:
    """Certify that I(C)_2 is spanned by rank-3 quadrics.

    ``points`` replaces the default candidate pool (the point at infinity is
    still appended for Weierstrass models).
    """
    if isinstance(model, RationalNormal):
        d = model.degree if d is None else d
    elif isinstance(model, _SingularQuartic):
        d = 4 if d is None else d
    if d is None:
        raise DegreeTooSmall("degree is required")
    g = model.genus
    if g == 1 and d < 4:
        raise DegreeTooSmall(f"genus 1 needs degree >= 4, got {d}")

    if isinstance(model, _SingularQuartic):
        if d != 4:
            raise DegreeTooSmall(f"{model.spec()} only exists in degree 4")
        forms = list(singular_quartic_generators(model, field))
        trace = {"kind": "explicit_singular", "model": model.spec()}
        return Qr3Certificate(field, model.spec(), 4, 3, forms, trace, expected_quadric_dim(4, 1))

    space = canonical_sections(model, field, d)
    if points is None:
        pool = candidate_pool(model, field, d, seed)
    else:
        pool = list(points)
        for p in pool:
            if not model.on_curve(field, p):
                raise PointNotOnCurve(f"{format_point(field, p)} is not on the curve")
        if isinstance(model, EllipticSmooth) and INFINITY not in pool:
            pool.append(INFINITY)
    quadrics, trace = _certify(space, pool)
    trace["seed"] = seed
    return Qr3Certificate(
        field=field,
        curve=model.spec(d),
        degree=d,
        ambient_dim=space.dim - 1,
        quadrics=quadrics,
        trace=trace,
        target_dim=expected_quadric_dim(d, g),
    )


# -- verification --------------------------------------------------------------


@dataclass
class VerificationReport:
    membership: list
    ranks: list
    ranks_ok: bool
    rank_floor_ok: bool
    span_dim: int
    dim_i2: int
    target_dim: int
    deficit: int
    span_ok: bool
    degree3_generation: bool
    degree3: dict = dc_field(default_factory=dict)

    @property
    def membership_ok(self) -> bool:
        return all(self.membership)

    @property
    def failed_checks(self) -> list[str]:
        failed = []
        if not self.membership_ok:
            failed.append("membership")
        if not (self.ranks_ok and self.rank_floor_ok):
            failed.append("ranks")
        if not self.span_ok:
            failed.append("span")
        if not self.degree3_generation:
            failed.append("degree3_generation")
        return failed

    @property
    def passed(self) -> bool:
        return not self.failed_checks

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        out["failed_checks"] = self.failed_checks
        return out


def verify_certificate(
    cert: Qr3Certificate,
    model: CurveModel | None = None,
    field: FieldSpec | None = None,
    d: int | None = None,
) -> VerificationReport:
    """Re-check every claim of ``cert`` from a freshly computed I(C)_2."""
    if model is None:
        model, spec_d = parse_curve(cert.curve)
        d = spec_d if d is None else d
    field = field or cert.field
    d = cert.degree if d is None else d
    space = canonical_sections(model, field, d)
    qs = quadric_space(space)

    member, ranks = [], []
    for q in cert.quadrics:
        try:
            member.append(membership(q, qs))
        except DimensionMismatch:
            member.append(False)
        try:
            ranks.append(q.rank)
        except Qr3Error:
            ranks.append(-1)
    span = IncrementalSpan(field, qs.nvars * (qs.nvars + 1) // 2)
    for q in cert.quadrics:
        if q.size == qs.nvars and q.field == field:
            span.add(q.flat())
    gen = generated_in_degree_3(space)
    return VerificationReport(
        membership=member,
        ranks=ranks,
        ranks_ok=all(0 <= r <= 3 for r in ranks),
        rank_floor_ok=all(r >= 3 for r in ranks),
        span_dim=span.dim,
        dim_i2=qs.dim,
        target_dim=cert.target_dim,
        deficit=qs.dim - span.dim,
        span_ok=span.dim == qs.dim and cert.target_dim == qs.dim,
        degree3_generation=gen.generated,
        degree3=gen.to_dict(),
    )


# -- the two-cone lemma --------------------------------------------------------


@dataclass(frozen=True)
class LemmaReport:
    dim_c0: int
    dim_s1: int
    dim_s2: int
    dim_sum: int
    dim_intersection: int
    dim_t: int
    expected_c0: int
    expected_s: int
    expected_t: int
    intersection_equals_t: bool
    sum_is_c0_minus_one: bool
    cones_in_c0: bool
    consistent: bool

    @property
    def formulas_ok(self) -> bool:
        return (
            self.dim_c0 == self.expected_c0
            and self.dim_s1 == self.dim_s2 == self.expected_s
            and self.dim_t == self.expected_t
        )

    @property
    def passed(self) -> bool:
        return (
            self.intersection_equals_t
            and self.sum_is_c0_minus_one
            and self.cones_in_c0
            and self.consistent
            and self.formulas_ok
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["formulas_ok"] = self.formulas_ok
        out["passed"] = self.passed
        return out


def _pulled_flats(space: SectionSpace, inclusion: Matrix) -> list[list]:
    return [q.pullback(inclusion).flat() for q in quadric_space(space).basis]


def _span_rank(field: FieldSpec, vecs: list, length: int) -> int:
    span = IncrementalSpan(field, length)
    for v in vecs:
        span.add(v)
    return span.dim


def lemma22_check(model: CurveModel, field: FieldSpec, d: int, p1: CurvePoint, p2: CurvePoint) -> LemmaReport:
    """Compare I(S1)_2 + I(S2)_2 and I(S1)_2 ∩ I(S2)_2 with I(C0)_2 and I(T)_2.

    S_i is the cone over the projection from p_i, T the cone over the
    projection from the line through p1 and p2.
    """
    g = model.genus
    if d < 2 * g + 3:
        raise DegreeTooSmall(f"need degree >= {2 * g + 3}, got {d}")
    if p1 == p2:
        raise PointsNotDistinct("p1 and p2 must be distinct")
    v0 = canonical_sections(model, field, d)
    v1 = vanishing_subspace(v0, p1)
    v2 = vanishing_subspace(v0, p2)
    v12 = vanishing_subspace(v1, p2)

    c0 = quadric_space(v0).flat_rows()
    s1 = _pulled_flats(v1, v1.inclusion)
    s2 = _pulled_flats(v2, v2.inclusion)
    t = _pulled_flats(v12, v1.inclusion @ v12.inclusion)
    length = v0.dim * (v0.dim + 1) // 2

    dim_sum = _span_rank(field, s1 + s2, length)
    # intersection: kernel of [S1^T | -S2^T]
    stacked = Matrix.from_columns(field, s1 + [[field.neg(x) for x in v] for v in s2], length)
    ker = kernel_basis(stacked)
    inter = []
    for col in ker.columns():
        vec = [field.zero] * length
        for a, v in zip(col[: len(s1)], s1):
            if a:
                vec = [field.add(x, field.mul(a, y)) for x, y in zip(vec, v)]
        inter.append(vec)
    dim_inter = _span_rank(field, inter, length)
    dim_t = _span_rank(field, t, length)
    inter_eq_t = dim_inter == dim_t == _span_rank(field, inter + t, length)
    dim_c0 = _span_rank(field, c0, length)
    cones_in_c0 = _span_rank(field, c0 + s1 + s2, length) == dim_c0

    dim_s1 = _span_rank(field, s1, length)
    dim_s2 = _span_rank(field, s2, length)
    return LemmaReport(
        dim_c0=dim_c0,
        dim_s1=dim_s1,
        dim_s2=dim_s2,
        dim_sum=dim_sum,
        dim_intersection=dim_inter,
        dim_t=dim_t,
        expected_c0=expected_quadric_dim(d, g),
        expected_s=expected_quadric_dim(d - 1, g),
        expected_t=expected_quadric_dim(d - 2, g),
        intersection_equals_t=inter_eq_t,
        sum_is_c0_minus_one=dim_sum == dim_c0 - 1,
        cones_in_c0=cones_in_c0,
        consistent=dim_sum == dim_s1 + dim_s2 - dim_inter,
    )


# -- brute-force oracle --------------------------------------------------------


@dataclass
class OracleVerdict:
    dim: int
    classes: int
    low_rank_classes: int
    spans: bool
    histogram: dict
    low_rank_vectors: list = dc_field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "classes": self.classes,
            "low_rank_classes": self.low_rank_classes,
            "spans": self.spans,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def _projective_vectors(p: int, m: int):
    for lead in range(m):
        for tail in itertools.product(range(p), repeat=m - lead - 1):
            yield (0,) * lead + (1,) + tail


def oracle_rank3_span(model: CurveModel, field: FieldSpec, d: int | None = None, cap: int = 10**6) -> OracleVerdict:
    """Enumerate every quadric of I(C)_2 up to scalars and record its rank.

    Independent of the certifier: it only uses the kernel basis and plain
    row reduction of each Gram matrix.
    """
    p = field.characteristic
    if not p:
        raise FieldError("the oracle enumerates a finite field; Q is not allowed")
    if d is None:
        d = model.degree if isinstance(model, RationalNormal) else 4
    space = canonical_sections(model, field, d)
    qs = quadric_space(space)
    m = qs.dim
    if m == 0:
        return OracleVerdict(0, 0, 0, True, {})
    classes = (p**m - 1) // (p - 1)
    if classes > cap:
        raise CapExceeded(f"{classes} projective classes exceed the cap {cap}")
    n = qs.nvars
    grams = [[list(r) for r in q.gram.rows] for q in qs.basis]
    hist: dict[int, int] = {}
    low, low_vectors = 0, []
    span = IncrementalSpan(field, m)
    for c in _projective_vectors(p, m):
        g = [[0] * n for _ in range(n)]
        for coef, gm in zip(c, grams):
            if coef:
                for i in range(n):
                    gi, row = g[i], gm[i]
                    for j in range(n):
                        if row[j]:
                            gi[j] += coef * row[j]
        g = [[x % p for x in row] for row in g]
        r = len(_rref_inplace(g, n, p))
        hist[r] = hist.get(r, 0) + 1
        if r <= 3:
            low += 1
            low_vectors.append(c)
            if span.dim < m:
                span.add(list(c))
    return OracleVerdict(m, classes, low, span.dim == m, hist, low_vectors)
