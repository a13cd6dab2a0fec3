"""Rationals and Gaussian rationals.

Rationals are plain :class:`fractions.Fraction` values; this module adds the
Gaussian rational type and the string codec ``"p/q"`` used in JSON documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

RationalLike = Union[int, Fraction, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: every exact operation must start from exact data.
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("Empty rational literal")
        try:
            return Fraction(text)
        except ValueError as e:
            raise ValueError(f"Invalid rational literal: {value!r}") from e
    raise TypeError(f"Cannot interpret {type(value).__name__} as an exact rational")


def format_fraction(value: Fraction) -> str:
    """Render a rational as ``p/q``, dropping ``q`` when it is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, slots=True)
class GaussRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @classmethod
    def coerce(cls, value: GaussLike) -> GaussRational:
        if isinstance(value, GaussRational):
            return value
        return cls(to_fraction(value), Fraction(0))

    # Arithmetic

    def __add__(self, other: GaussLike) -> GaussRational:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: GaussLike) -> GaussRational:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: GaussLike) -> GaussRational:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> GaussRational:
        return GaussRational(-self.re, -self.im)

    def __mul__(self, other: GaussLike) -> GaussRational:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: GaussLike) -> GaussRational:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("Division by the Gaussian rational zero")
        num = self * o.conjugate()
        return GaussRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other: GaussLike) -> GaussRational:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> GaussRational:
        if exponent < 0:
            return ONE / (self**-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def exquo(self, other: GaussRational) -> GaussRational:
        """Exact quotient (always exact in a field)."""
        return self / other

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __lt__(self, other: GaussRational) -> bool:
        return self.sort_key() < other.sort_key()

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return format_fraction(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{format_fraction(self.im)}*i"
        if self.re == 0:
            return imag
        if imag.startswith("-"):
            return f"{format_fraction(self.re)} - {imag[1:]}"
        return f"{format_fraction(self.re)} + {imag}"

    def __repr__(self) -> str:
        return f"GaussRational({self})"

    def to_json(self) -> dict[str, str]:
        return {"re": format_fraction(self.re), "im": format_fraction(self.im)}

    @classmethod
    def from_json(cls, data: dict[str, RationalLike] | RationalLike) -> GaussRational:
        if isinstance(data, dict):
            return cls(to_fraction(data.get("re", 0)), to_fraction(data.get("im", 0)))
        return cls(to_fraction(data))


GaussLike = Union[GaussRational, int, Fraction]


def _coerce_or_none(value: object) -> GaussRational | None:
    if isinstance(value, GaussRational):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GaussRational(Fraction(value), Fraction(0))
    return None


ZERO = GaussRational(0, 0)
ONE = GaussRational(1, 0)
I = GaussRational(0, 1)  # noqa: E741
