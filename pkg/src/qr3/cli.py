"""Command-line interface: ``qr3 <command> [options]``.

Exit codes: 0 on success, 2 on a mathematical diagnostic (missing rational
roots or points, a failed spanning or verification check), 1 on usage or
internal errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
import warnings
from contextlib import contextmanager
from pathlib import Path

from . import jsonio
from .certify import build_certificate, lemma22_check, oracle_rank3_span, verify_certificate
from .curves import canonical_sections, format_point, parse_curve, parse_points, sample_points
from .errors import MathDiagnostic, Qr3Error
from .field import FieldSpec
from .ideal import cubic_space, generated_in_degree_3, quadric_space
from .suite import format_table, run_suite

EXIT_OK, EXIT_ERROR, EXIT_DIAGNOSTIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}; run '{self.prog} --help' for usage")


class RunReport:
    def __init__(self, argv: list[str]):
        self.command = list(argv)
        self.field: str | None = None
        self.timings_ms: dict[str, int] = {}
        self.outcome: dict | None = None
        self.warnings: list[str] = []
        self.exit_code = EXIT_OK

    @contextmanager
    def phase(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings_ms[name] = round((time.perf_counter() - start) * 1000)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "field": self.field,
            "timings_ms": self.timings_ms,
            "outcome": self.outcome,
            "warnings": self.warnings,
            "exit_code": self.exit_code,
        }


def _field(text: str) -> FieldSpec:
    return FieldSpec.parse(text)


def _primes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad prime list {text!r}; expected e.g. 5,7,11") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qr3", description="Rank-3 quadric certificates for curve ideals.")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, curve=True):
        if curve:
            p.add_argument("--curve", required=True, help="rnc:<d>, elliptic:a=<s>,b=<s>,d=<n>, nodal4 or cusp4")
            p.add_argument("--field", default="Q", help="Q or Fp:<p> (default Q)")
        p.add_argument("--json", action="store_true", help="print the full run report as JSON")
        p.add_argument("--out", help="write the outcome payload (e.g. the certificate) to this file")

    p = sub.add_parser("ideal", help="compute I(C)_2 or I(C)_3")
    common(p)
    p.add_argument("--degree", "-d", type=int, default=2, choices=(2, 3), help="graded piece (default 2)")

    p = sub.add_parser("certify", help="build a rank-3 certificate")
    common(p)
    p.add_argument("--degree", "-d", type=int, help="embedding degree (overrides the curve spec)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--primes", help="comma-separated primes to try in order, e.g. 5,7,11")
    p.add_argument("--points", help="candidate points, ';'-separated, e.g. '(0,1);(2,3)'")

    p = sub.add_parser("verify", help="re-check a certificate file")
    common(p, curve=False)
    p.add_argument("--cert", required=True, help="certificate JSON file")

    p = sub.add_parser("oracle", help="brute-force rank census of I(C)_2 over F_p")
    common(p)
    p.add_argument("--degree", "-d", type=int, help="embedding degree (overrides the curve spec)")
    p.add_argument("--cap", type=int, default=10**6, help="maximum number of projective classes")

    p = sub.add_parser("lemma22", help="two-cone intersection and sum check")
    common(p)
    p.add_argument("--degree", "-d", type=int, help="embedding degree (overrides the curve spec)")
    p.add_argument("--points", help="two points 'p1;p2' (default: first two sample points)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("paper-suite", help="run the reproduction battery")
    common(p, curve=False)
    p.add_argument("--field-override", help="run field-dependent rows over this field instead")
    return parser


# -- commands --------------------------------------------------------------


def _cmd_ideal(args, report: RunReport) -> tuple[dict, str]:
    model, d = parse_curve(args.curve)
    field = _field(args.field)
    report.field = str(field)
    model.check(field)
    with report.phase("sections"):
        space = canonical_sections(model, field, d)
    if args.degree == 2:
        with report.phase("kernel"):
            qs = quadric_space(space)
        out = jsonio.quadric_space_to_dict(qs)
        return out, f"I(C)_2 of {args.curve} over {field}: dim {qs.dim}, ranks {qs.ranks()}"
    with report.phase("kernel"):
        cubics = cubic_space(space)
        gen = generated_in_degree_3(space)
    out = {"nvars": cubics.nvars, "field": str(field), "dim": cubics.dim, "generation": gen.to_dict()}
    return out, f"I(C)_3 of {args.curve} over {field}: dim {cubics.dim}, generated by I_2: {gen.generated}"


def _cmd_certify(args, report: RunReport) -> tuple[dict, str]:
    model, d = parse_curve(args.curve)
    if args.degree is not None:
        d = args.degree
    fields = [FieldSpec(p) for p in _primes(args.primes)] if args.primes else [_field(args.field)]
    attempts = []
    last: MathDiagnostic | None = None
    for field in fields:
        report.field = str(field)
        try:
            model.check(field)
            points = parse_points(field, args.points) if args.points else None
            with report.phase(f"certify[{field}]"):
                cert = build_certificate(model, field, d, seed=args.seed, points=points)
        except MathDiagnostic as exc:
            attempts.append(f"{field}: {type(exc).__name__}")
            last = exc
            continue
        except Qr3Error as exc:
            if len(fields) == 1:
                raise
            attempts.append(f"{field}: {type(exc).__name__}")
            continue
        if attempts:
            report.warnings.append("skipped " + ", ".join(attempts))
        with report.phase("verify"):
            ver = verify_certificate(cert)
        payload = jsonio.certificate_to_dict(cert)
        if not ver.passed:
            report.exit_code = EXIT_DIAGNOSTIC
        summary = (
            f"certificate for {cert.curve} over {field}: {len(cert.quadrics)} quadrics, "
            f"target_dim {cert.target_dim}, ranks {sorted(set(cert.ranks))}, verified {ver.passed}"
        )
        return payload, summary
    if last is None:
        raise UsageError("no usable field; " + ", ".join(attempts))
    report.warnings.append("all fields failed: " + ", ".join(attempts))
    raise last


def _cmd_verify(args, report: RunReport) -> tuple[dict, str]:
    path = Path(args.cert)
    if not path.exists():
        raise UsageError(f"certificate file {path} does not exist")
    with report.phase("read"):
        cert = jsonio.read_certificate(path)
    report.field = str(cert.field)
    with report.phase("verify"):
        ver = verify_certificate(cert)
    if not ver.passed:
        report.exit_code = EXIT_DIAGNOSTIC
    failed = ", ".join(ver.failed_checks) or "none"
    summary = f"span {ver.span_dim}/{ver.dim_i2} (deficit {ver.deficit}); failed checks: {failed}"
    return ver.to_dict(), summary


def _cmd_oracle(args, report: RunReport) -> tuple[dict, str]:
    model, d = parse_curve(args.curve)
    if args.degree is not None:
        d = args.degree
    field = _field(args.field)
    report.field = str(field)
    model.check(field)
    with report.phase("enumerate"):
        verdict = oracle_rank3_span(model, field, d, cap=args.cap)
    if not verdict.spans:
        report.exit_code = EXIT_DIAGNOSTIC
    summary = (
        f"{verdict.classes} classes, {verdict.low_rank_classes} of rank <= 3, "
        f"spans: {verdict.spans}, histogram {verdict.to_dict()['histogram']}"
    )
    return verdict.to_dict(), summary


def _cmd_lemma22(args, report: RunReport) -> tuple[dict, str]:
    model, d = parse_curve(args.curve)
    if args.degree is not None:
        d = args.degree
    field = _field(args.field)
    report.field = str(field)
    model.check(field)
    if args.points:
        pts = parse_points(field, args.points)
        if len(pts) != 2:
            raise UsageError("--points needs exactly two points, e.g. '(1:0);(0:1)'")
    else:
        pts = sample_points(model, field, 2, seed=args.seed)
        if len(pts) < 2:
            raise UsageError("not enough rational points; pass --points")
    with report.phase("lemma"):
        rep = lemma22_check(model, field, d, *pts)
    if not rep.passed:
        report.exit_code = EXIT_DIAGNOSTIC
    out = rep.to_dict()
    out["points"] = [format_point(field, p) for p in pts]
    return out, f"sum {rep.dim_sum} of {rep.dim_c0}, intersection {rep.dim_intersection} = dim I(T)_2 {rep.dim_t}: {rep.passed}"


def _cmd_suite(args, report: RunReport) -> tuple[dict, str]:
    override = _field(args.field_override) if args.field_override else None
    report.field = str(override) if override else None
    with report.phase("suite"):
        rows = run_suite(override)
    if not all(r.passed for r in rows):
        report.exit_code = EXIT_ERROR
    return {"rows": [r.to_dict() for r in rows]}, format_table(rows)


COMMANDS = {
    "ideal": _cmd_ideal,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
    "lemma22": _cmd_lemma22,
    "paper-suite": _cmd_suite,
}


_REMEDIES = {
    "FieldError": "use --field Q or --field Fp:<odd prime>",
    "CurveSpecError": "use rnc:<d>, elliptic:a=<s>,b=<s>,d=<n>, nodal4 or cusp4",
    "CertificateFormatError": "pass a file written by 'qr3 certify --out'",
    "DegreeTooSmall": "raise the degree (rnc needs d >= 2, elliptic d >= 4)",
}


def run(argv: list[str]) -> tuple[RunReport, str]:
    """Execute one command; returns the report and a human-readable summary."""
    report = RunReport(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        report.exit_code = EXIT_ERROR
        return report, f"usage error: {exc}"
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            payload, summary = COMMANDS[args.command](args, report)
        report.warnings.extend(str(w.message) for w in caught)
        report.outcome = payload
        if args.out:
            Path(args.out).write_text(jsonio.dumps(payload))
    except MathDiagnostic as exc:
        report.exit_code = EXIT_DIAGNOSTIC
        report.outcome = {"diagnostic": type(exc).__name__, "message": str(exc)}
        summary = f"diagnostic: {type(exc).__name__}: {exc}"
    except UsageError as exc:
        report.exit_code = EXIT_ERROR
        summary = f"usage error: {exc}"
    except (Qr3Error, ValueError, OSError) as exc:
        report.exit_code = EXIT_ERROR
        report.outcome = {"error": type(exc).__name__, "message": str(exc)}
        summary = f"error: {type(exc).__name__}: {exc}"
        hint = _REMEDIES.get(type(exc).__name__)
        if hint:
            summary += f"; {hint}"
    return report, summary


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, summary = run(argv)
    if "--json" in argv:
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        stream = sys.stdout if report.exit_code == EXIT_OK else sys.stderr
        print(summary, file=stream)
        for w in report.warnings:
            print(f"warning: {w}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
