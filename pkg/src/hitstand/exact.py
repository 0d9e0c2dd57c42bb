"""Exact rational helpers.

Probabilities and expectations are carried as :class:`fractions.Fraction`
everywhere; floats only appear when a value is rendered for display.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Union

Rational = Fraction

RationalLike = Union[Fraction, int]


def rational_round(x: RationalLike, places: int) -> str:
    """Render ``x`` with ``places`` decimals, rounding half away from zero.

    >>> rational_round(Fraction(501, 2256), 4)
    '0.2221'
    >>> rational_round(Fraction(-2, 48), 4)
    '-0.0417'
    """
    if places < 0:
        raise ValueError("places must be non-negative")
    x = Fraction(x)
    scale = 10**places
    mag = abs(x) * scale
    q, r = divmod(mag.numerator, mag.denominator)
    if 2 * r >= mag.denominator:
        q += 1
    sign = "-" if x < 0 and q != 0 else ""
    digits = str(q).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def to_decimal(x: RationalLike, places: int) -> Decimal:
    return Decimal(rational_round(x, places))


def fraction_str(x: RationalLike) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
