"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, str]


def rational(value: RationalLike) -> Fraction:
    """Parse ``value`` into a reduced Fraction; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string like '1/3'")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class Gauss:
    """A Gaussian rational ``re + im*i`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "Gauss":
        if isinstance(value, Gauss):
            return value
        return cls(value)

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other) -> "Gauss":
        if isinstance(other, (int, Fraction)):
            return Gauss(self.re + other, self.im)
        other = Gauss.coerce(other)
        return Gauss(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "Gauss":
        return Gauss(-self.re, -self.im)

    def __sub__(self, other) -> "Gauss":
        return self + (-Gauss.coerce(other))

    def __rsub__(self, other) -> "Gauss":
        return Gauss.coerce(other) - self

    def __mul__(self, other) -> "Gauss":
        if isinstance(other, (int, Fraction)):
            return Gauss(self.re * other, self.im * other)
        other = Gauss.coerce(other)
        if not other.im:
            return Gauss(self.re * other.re, self.im * other.re)
        return Gauss(self.re * other.re - self.im * other.im,
                     self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Gauss":
        if isinstance(other, (int, Fraction)):
            return Gauss(self.re / other, self.im / other)
        other = Gauss.coerce(other)
        norm = other.re * other.re + other.im * other.im
        num = self * other.conjugate()
        return Gauss(num.re / norm, num.im / norm)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, Gauss):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"Gauss({self.re})"
        return f"Gauss({self.re}, {self.im})"

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}
