"""JSON encodings of matrices, quadric spaces and certificates.

Scalars are written as strings (``"-3/7"``, ``"5"``) so that files are exact
and byte-stable. Ranks stored in a certificate file are informational: the
reader recomputes them from the Gram matrices.
"""

from __future__ import annotations

import json
from pathlib import Path

from .certify import Qr3Certificate
from .errors import CertificateFormatError, FieldError
from .field import FieldSpec
from .ideal import QuadricSpace
from .linalg import Matrix
from .quadric import QuadraticForm

CERTIFICATE_KEYS = ("engine_version", "field", "curve", "degree", "ambient_dim", "target_dim", "quadrics", "ranks", "trace")


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def matrix_to_json(m: Matrix) -> dict:
    return {"rows": m.nrows, "cols": m.ncols, "entries": m.to_strings()}


def matrix_from_json(field: FieldSpec, obj: dict) -> Matrix:
    try:
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    except (KeyError, TypeError):
        raise CertificateFormatError("matrix needs rows, cols and entries") from None
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise CertificateFormatError(f"matrix entries do not match the declared {rows}x{cols} shape")
    try:
        return Matrix.from_rows(field, [[field.parse_scalar(x) for x in r] for r in entries], cols)
    except (FieldError, TypeError, AttributeError) as exc:
        raise CertificateFormatError(f"bad matrix entry: {exc}") from None


def certificate_to_dict(cert: Qr3Certificate) -> dict:
    return {
        "engine_version": cert.engine_version,
        "field": str(cert.field),
        "curve": cert.curve,
        "degree": cert.degree,
        "ambient_dim": cert.ambient_dim,
        "target_dim": cert.target_dim,
        "quadrics": [matrix_to_json(q.gram) for q in cert.quadrics],
        "ranks": cert.ranks,
        "trace": cert.trace,
    }


def certificate_from_dict(obj: dict) -> Qr3Certificate:
    if not isinstance(obj, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    missing = [k for k in CERTIFICATE_KEYS if k not in obj and k != "ranks"]
    if missing:
        raise CertificateFormatError(f"certificate is missing {', '.join(missing)}")
    try:
        field = FieldSpec.parse(obj["field"])
    except (FieldError, AttributeError) as exc:
        raise CertificateFormatError(f"bad field: {exc}") from None
    quadrics = []
    for entry in obj["quadrics"]:
        gram = matrix_from_json(field, entry)
        if gram.nrows != gram.ncols:
            raise CertificateFormatError("Gram matrices must be square")
        try:
            quadrics.append(QuadraticForm(gram))
        except ValueError as exc:
            raise CertificateFormatError(str(exc)) from None
    return Qr3Certificate(
        field=field,
        curve=obj["curve"],
        degree=int(obj["degree"]),
        ambient_dim=int(obj["ambient_dim"]),
        quadrics=quadrics,
        trace=obj["trace"],
        target_dim=int(obj["target_dim"]),
        engine_version=obj["engine_version"],
    )


def write_certificate(cert: Qr3Certificate, path: str | Path) -> None:
    Path(path).write_text(dumps(certificate_to_dict(cert)))


def read_certificate(path: str | Path) -> Qr3Certificate:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"{path}: not valid JSON ({exc})") from None
    return certificate_from_dict(obj)


def quadric_space_to_dict(qs: QuadricSpace) -> dict:
    ranks = qs.ranks()
    return {
        "ambient_dim": qs.ambient_dim,
        "field": str(qs.field),
        "quadrics": [matrix_to_json(q.gram) for q in qs.basis],
        "checksum": {"ambient_dim": qs.ambient_dim, "dim": qs.dim, "ranks": ranks},
    }


def quadric_space_from_dict(obj: dict) -> QuadricSpace:
    field = FieldSpec.parse(obj["field"])
    forms = tuple(QuadraticForm(matrix_from_json(field, m)) for m in obj["quadrics"])
    return QuadricSpace(int(obj["ambient_dim"]), field, forms)
