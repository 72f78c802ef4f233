"""Exception hierarchy.

Errors deriving from :class:`MathDiagnostic` are mathematical outcomes over a
non-closed field (missing rational points or roots, a failed spanning claim).
They are reportable data rather than bugs; the CLI maps them to exit code 2.
"""


class Qr3Error(Exception):
    """Base class for all package errors."""


class FieldError(Qr3Error, ValueError):
    """Bad field specification or a value that cannot live in the field."""


class FieldMismatch(FieldError):
    pass


class NonSymmetric(Qr3Error, ValueError):
    pass


class ZeroForm(Qr3Error, ValueError):
    pass


class DegreeTooSmall(Qr3Error, ValueError):
    pass


class PointAtInfinity(Qr3Error, ValueError):
    pass


class PointNotOnCurve(Qr3Error, ValueError):
    pass


class DimensionFloor(Qr3Error, ValueError):
    pass


class SingularPoint(Qr3Error, ValueError):
    pass


class RepeatedPoint(Qr3Error, ValueError):
    """Higher-order vanishing requested where it is not supported."""


class WrongModel(Qr3Error, ValueError):
    pass


class DimensionMismatch(Qr3Error, ValueError):
    pass


class PointsNotDistinct(Qr3Error, ValueError):
    pass


class NotAPencil(Qr3Error, ValueError):
    pass


class UnexpectedRank(Qr3Error):
    pass


class CapExceeded(Qr3Error):
    pass


class InclusionMismatch(Qr3Error, AssertionError):
    """A pulled-back quadric does not vanish on the parent curve."""


class CurveSpecError(Qr3Error, ValueError):
    pass


class MathDiagnostic(Qr3Error):
    """A field-rationality failure; see module docstring."""


class InsufficientRationalRoots(MathDiagnostic):
    pass


class InsufficientPoints(MathDiagnostic):
    pass


class SpanningFailure(MathDiagnostic):
    def __init__(self, message: str, dims: dict | None = None):
        super().__init__(message)
        self.dims = dims or {}


class CertificateFormatError(Qr3Error, ValueError):
    """A certificate or report file does not match its JSON layout."""
