from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hitstand.exact import fraction_str, parse_fraction, rational_round


class TestRounding:
    @pytest.mark.parametrize(
        "x, places, text",
        [
            (Fraction(1, 2), 0, "1"),
            (Fraction(-1, 2), 0, "-1"),
            (Fraction(23, 48), 6, "0.479167"),
            (Fraction(-128, 2448), 5, "-0.05229"),
            (Fraction(1, 3), 3, "0.333"),
            (Fraction(-1, 10**9), 3, "0.000"),
        ],
    )
    def test_examples(self, x, places, text):
        assert rational_round(x, places) == text

    @given(st.fractions(max_denominator=10**6), st.integers(min_value=0, max_value=12))
    def test_matches_decimal_half_up(self, x, places):
        with localcontext() as ctx:
            ctx.prec = 80
            expected = (Decimal(x.numerator) / Decimal(x.denominator)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
        got = Decimal(rational_round(x, places))
        assert got == expected

    def test_negative_places(self):
        with pytest.raises(ValueError):
            rational_round(Fraction(1), -1)


class TestFractionStrings:
    @given(st.fractions())
    def test_round_trip(self, x):
        assert parse_fraction(fraction_str(x)) == x

    def test_integer_has_denominator(self):
        assert fraction_str(Fraction(0)) == "0/1"
