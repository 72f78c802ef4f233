"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``. Expected values come from closed
formulas or brute force computed here, not from the engine.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from qr3 import (
    EllipticQuarticCuspidal,
    EllipticQuarticNodal,
    EllipticSmooth,
    FieldSpec,
    QuadraticForm,
    RationalNormal,
    build_certificate,
    canonical_sections,
    det_pencil,
    binary_form_roots,
    generated_in_degree_3,
    lemma22_check,
    oracle_rank3_span,
    quadric_space,
    sample_points,
    symmetric_rank,
    verify_certificate,
)
from qr3.errors import MathDiagnostic
from qr3.linalg import IncrementalSpan

Q = FieldSpec(0)
F7 = FieldSpec(7)
F13 = FieldSpec(13)
E01 = EllipticSmooth(Fraction(0), Fraction(1))
BATTERY = [(0, 1), (1, 1), (-1, 0), (2, 3), (-2, 1)]
PRIMES = [p for p in range(5, 98) if all(p % q for q in range(2, int(p**0.5) + 1))]


def report(capsys, n, ok, detail, seconds, limit):
    status = "PASS" if ok and seconds < limit else "FAIL"
    with capsys.disabled():
        print(f"\n[criterion {n}] {status} ({seconds:.2f}s, limit {limit}s) {detail}")
    assert ok, detail
    assert seconds < limit, f"took {seconds:.1f}s, limit {limit}s"


def span_dim(field, forms):
    span = IncrementalSpan(field, len(forms[0].flat()))
    for q in forms:
        span.add(q.flat())
    return span.dim


def test_criterion_1_dimension_formula(capsys):
    cases = [(RationalNormal(d), f, d, comb(d, 2)) for f in (Q, F7) for d in range(2, 11)]
    cases += [(E01, F13, d, comb(d - 1, 2) - 1) for d in range(4, 9)]
    bad, worst = [], 0.0
    for model, f, d, expected in cases:
        start = time.perf_counter()
        got = quadric_space(canonical_sections(model, f, d)).dim
        worst = max(worst, time.perf_counter() - start)
        if got != expected:
            bad.append(f"{model.spec(d)}/{f}: {got} != {expected}")
    report(capsys, 1, not bad, "; ".join(bad) or f"{len(cases)} cases exact", worst, 10)


def test_criterion_2_two_cone_lemma(capsys):
    bad, worst = [], 0.0
    for model, f, d in ((RationalNormal(5), Q, 5), (E01, F13, 6)):
        start = time.perf_counter()
        p1, p2 = sample_points(model, f, 2)
        rep = lemma22_check(model, f, d, p1, p2)
        worst = max(worst, time.perf_counter() - start)
        g = model.genus
        c0 = comb(d - g, 2) - g
        t = comb(d - 2 - g, 2) - g
        if not (rep.intersection_equals_t and rep.dim_t == t and rep.dim_sum == c0 - 1 and rep.dim_c0 == c0):
            bad.append(f"{model.spec(d)}/{f}: {rep.to_dict()}")
    report(capsys, 2, not bad, "; ".join(bad) or "intersection = I(T)_2, sum = dim - 1", worst, 10)


def test_criterion_3_rnc_pipeline(capsys):
    bad, worst = [], 0.0
    for f in (Q, F7):
        for d in range(2, 11):
            start = time.perf_counter()
            cert = build_certificate(RationalNormal(d), f)
            rep = verify_certificate(cert)
            worst = max(worst, time.perf_counter() - start)
            ranks = {symmetric_rank(q.gram)[0] for q in cert.quadrics}
            if not rep.passed or ranks != {3} or len(cert.quadrics) != comb(d, 2):
                bad.append(f"rnc:{d}/{f}: {rep.failed_checks} ranks {ranks}")
    report(capsys, 3, not bad, "; ".join(bad) or "18 certificates verified, all ranks 3", worst, 60)


def _det_roots_brute(det, p):
    return sum(1 for c in range(p) if det(1, c) % p == 0) + (det(0, 1) % p == 0)


def test_criterion_4_elliptic_pencils(capsys):
    start = time.perf_counter()
    bad, found = [], []
    for a, b in BATTERY:
        model = EllipticSmooth(Fraction(a), Fraction(b))
        certified = None
        for p in PRIMES:
            if (4 * a**3 + 27 * b**2) % p == 0:
                continue
            f = FieldSpec(p)
            qs = quadric_space(canonical_sections(model, f, 4))
            det = det_pencil(qs.basis[0].gram, qs.basis[1].gram)
            roots = binary_form_roots(det)
            if len(roots) != _det_roots_brute(det, p):
                bad.append(f"({a},{b})/F{p}: root count disagrees with scan")
            if len(roots) == 4 and sum(r.multiplicity for r in roots) == 4:
                members = [QuadraticForm(qs.basis[0].gram.scale(r.lam) + qs.basis[1].gram.scale(r.mu)) for r in roots]
                if any(m.rank != 3 for m in members) or any(span_dim(f, [x, y]) != 2 for x, y in combinations(members, 2)):
                    bad.append(f"({a},{b})/F{p}: split pencil members wrong")
            if certified is None and len(roots) >= 2:
                try:
                    cert = build_certificate(model, f, 4)
                except MathDiagnostic as exc:
                    bad.append(f"({a},{b})/F{p}: {exc}")
                    continue
                if cert.ranks == [3, 3] and span_dim(f, cert.quadrics) == 2 and verify_certificate(cert).passed:
                    certified = p
        if certified is None:
            bad.append(f"({a},{b}): no prime in 5..97 certified")
        else:
            found.append(f"({a},{b})@F{certified}")
    report(capsys, 4, not bad, "; ".join(bad) or ", ".join(found), time.perf_counter() - start, 5)


def test_criterion_5_singular_quartics(capsys):
    start = time.perf_counter()
    # the expected pair, typed in directly
    q1 = QuadraticForm.from_monomials(Q, 4, {(0, 0): 1, (1, 2): 1})
    cusp2 = QuadraticForm.from_monomials(Q, 4, {(3, 3): 1, (0, 2): 1})
    node2 = QuadraticForm.from_monomials(Q, 4, {(3, 3): 1, (0, 2): 1, (0, 3): 1})
    bad = []
    for name, model, pair in (("cusp", EllipticQuarticCuspidal(), (q1, cusp2)), ("node", EllipticQuarticNodal(), (q1, node2))):
        ranks = [symmetric_rank(q.gram)[0] for q in pair]
        cert = build_certificate(model, Q)
        same = span_dim(Q, list(pair) + cert.quadrics) == 2
        if ranks != [3, 3] or span_dim(Q, list(pair)) != 2 or not same:
            bad.append(f"{name}: ranks {ranks}, matches engine {same}")
    report(capsys, 5, not bad, "; ".join(bad) or "cusp and node pairs: ranks 3,3, span 2", time.perf_counter() - start, 1)


ORACLE_BATTERY = [
    (RationalNormal(3), 3, 3),
    (RationalNormal(4), 3, 4),
    (RationalNormal(4), 5, 4),
    (RationalNormal(5), 3, 5),
    (E01, 5, 4),
    (E01, 7, 4),
    (EllipticSmooth(Fraction(1), Fraction(1)), 7, 4),
    (E01, 5, 5),
]


def test_criterion_6_oracle_equivalence(capsys):
    start = time.perf_counter()
    bad, rows = [], []
    for model, p, d in ORACLE_BATTERY:
        f = FieldSpec(p)
        verdict = oracle_rank3_span(model, f, d)
        assert (p**verdict.dim - 1) // (p - 1) == verdict.classes <= 10**6
        try:
            certified = verify_certificate(build_certificate(model, f, d)).passed
        except MathDiagnostic:
            certified = False
        low = {r: c for r, c in verdict.histogram.items() if r < 3}
        rows.append(f"{model.spec(d)}/F{p}={verdict.spans}")
        if verdict.spans != certified or low:
            bad.append(f"{model.spec(d)}/F{p}: oracle {verdict.spans} certifier {certified} low {low}")
    report(capsys, 6, not bad, "; ".join(bad) or ", ".join(rows), time.perf_counter() - start, 120)


def test_criterion_7_generation(capsys):
    start = time.perf_counter()
    cases = [(RationalNormal(d), d) for d in range(3, 9)] + [(E01, d) for d in range(4, 8)]
    bad = []
    for model, d in cases:
        rep = generated_in_degree_3(canonical_sections(model, F13, d))
        if not rep.generated or rep.deficit != 0:
            bad.append(f"{model.spec(d)}: deficit {rep.deficit}")
    report(capsys, 7, not bad, "; ".join(bad) or f"{len(cases)} curves, deficit 0", time.perf_counter() - start, 60)


def test_criterion_8_determinism(capsys, tmp_path):
    start = time.perf_counter()
    outs = []
    for i in range(2):
        path = tmp_path / f"cert{i}.json"
        subprocess.run(
            [sys.executable, "-m", "qr3", "certify", "--curve", "elliptic:a=0,b=1,d=5", "--field", "Fp:13", "--seed", "7", "--out", str(path)],
            check=True,
            capture_output=True,
        )
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and json.loads(outs[0])["target_dim"] == 5
    report(capsys, 8, ok, "byte-identical" if ok else "outputs differ", time.perf_counter() - start, 60)


def test_criterion_9_negative_controls(capsys):
    start = time.perf_counter()
    bad = []
    cert = build_certificate(E01, F13, 6)
    # inject a rank-4 member of I_2: a sum of certificate quadrics
    injected = None
    for x, y in combinations(cert.quadrics, 2):
        g = x.gram + y.gram
        if symmetric_rank(g)[0] == 4:
            injected = QuadraticForm(g)
            break
    assert injected is not None
    cert.quadrics.append(injected)
    rep = verify_certificate(cert)
    if rep.failed_checks != ["ranks"]:
        bad.append(f"rank-4 injection flagged {rep.failed_checks}")

    cert = build_certificate(E01, F13, 6)
    cert.quadrics.pop()
    rep = verify_certificate(cert)
    if rep.failed_checks != ["span"] or rep.deficit != 1:
        bad.append(f"removal flagged {rep.failed_checks} deficit {rep.deficit}")
    report(capsys, 9, not bad, "; ".join(bad) or "ranks and span failures flagged", time.perf_counter() - start, 60)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
