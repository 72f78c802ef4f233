"""Exact scalar fields: the rationals and prime fields of odd characteristic.

Raw values are kept in their cheapest canonical form so the linear algebra
can work on plain Python objects:

* over Q a value is a ``gmpy2.mpq`` (lowest terms, positive denominator, so
  equality is representation equality);
* over F_p a value is an ``int`` in ``[0, p)``.

:class:`Scalar` wraps a raw value together with its field for the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from gmpy2 import mpq
from sympy import isprime

from .errors import FieldError, FieldMismatch

Raw = Union[int, "mpq"]

_MPQ = type(mpq(0))


@dataclass(frozen=True)
class FieldSpec:
    """Either Q (``characteristic == 0``) or F_p for an odd prime p."""

    characteristic: int

    def __post_init__(self) -> None:
        p = self.characteristic
        if not isinstance(p, int) or p < 0:
            raise FieldError(f"characteristic must be a nonnegative integer, got {p!r}")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if p != 0 and not isprime(p):
            raise FieldError(f"{p} is not an odd prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"Q"`` or ``"Fp:<p>"``."""
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls(0)
        if text.startswith("Fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise FieldError(f"bad prime in field spec {text!r}") from None
            return cls(p)
        raise FieldError(f"unknown field spec {text!r}; expected 'Q' or 'Fp:<p>'")

    @property
    def kind(self) -> str:
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"Fp:{self.characteristic}"

    # -- raw value handling -------------------------------------------------

    @property
    def zero(self) -> Raw:
        return 0 if self.characteristic else mpq(0)

    @property
    def one(self) -> Raw:
        return 1 if self.characteristic else mpq(1)

    def convert(self, value) -> Raw:
        """Coerce an int, Fraction, scalar string or :class:`Scalar` to a raw value."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"scalar over {value.field} used in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse_scalar(value)
        p = self.characteristic
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return value % p if p else mpq(value)
        if isinstance(value, (Fraction, _MPQ)):
            if not p:
                return mpq(value.numerator, value.denominator)
            den = int(value.denominator) % p
            if den == 0:
                raise FieldError(f"{value} has denominator divisible by {p}")
            return int(value.numerator) * pow(den, -1, p) % p
        raise TypeError(f"cannot convert {type(value).__name__} into {self}")

    def inv(self, x: Raw) -> Raw:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(x, -1, p) if p else 1 / x

    def neg(self, x: Raw) -> Raw:
        p = self.characteristic
        return (-x) % p if p else -x

    def add(self, x: Raw, y: Raw) -> Raw:
        p = self.characteristic
        return (x + y) % p if p else x + y

    def sub(self, x: Raw, y: Raw) -> Raw:
        p = self.characteristic
        return (x - y) % p if p else x - y

    def mul(self, x: Raw, y: Raw) -> Raw:
        p = self.characteristic
        return x * y % p if p else x * y

    def div(self, x: Raw, y: Raw) -> Raw:
        return self.mul(x, self.inv(y))

    def half(self) -> Raw:
        return self.inv(self.convert(2))

    def power(self, x: Raw, e: int) -> Raw:
        p = self.characteristic
        return pow(x, e, p) if p else x**e

    def elements(self):
        """Iterate the elements of F_p in residue order (F_p only)."""
        if not self.characteristic:
            raise FieldError("Q has no finite element enumeration")
        return range(self.characteristic)

    # -- text encoding ------------------------------------------------------

    def format_scalar(self, x: Raw) -> str:
        if self.characteristic:
            return str(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def parse_scalar(self, text: str) -> Raw:
        text = text.strip()
        try:
            value = Fraction(text) if "/" in text else int(text)
        except ValueError:
            raise FieldError(f"bad scalar {text!r}") from None
        return self.convert(value)


@dataclass(frozen=True)
class Scalar:
    """A field element that remembers its field."""

    field: FieldSpec
    value: Raw

    @classmethod
    def of(cls, field: FieldSpec, value) -> "Scalar":
        return cls(field, field.convert(value))

    def _other(self, other) -> Raw:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.field.convert(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Scalar(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Scalar(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Scalar(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Scalar(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Scalar(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self) -> bool:
        return bool(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.value == self.field.convert(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __str__(self) -> str:
        return self.field.format_scalar(self.value)

    def __repr__(self) -> str:
        return f"Scalar({self}, {self.field})"
