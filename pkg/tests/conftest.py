from fractions import Fraction

import pytest

from qr3 import EllipticSmooth, FieldSpec

Q = FieldSpec(0)


@pytest.fixture
def e01():
    """y^2 = x^3 + 1."""
    return EllipticSmooth(Fraction(0), Fraction(1))
