import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divaudit.numeric import (
    EXACT,
    FLOAT,
    DomainError,
    NumericMode,
    approx_eq,
    cmp,
    format_number,
    from_json_number,
    power,
    to_fraction,
    to_json_number,
)

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


class TestConversion:
    def test_to_fraction_accepts_strings_and_ints(self):
        assert to_fraction("3/4") == F(3, 4)
        assert to_fraction(2) == F(2)
        assert to_fraction("0.25") == F(1, 4)

    def test_to_fraction_rejects_bool(self):
        with pytest.raises(TypeError):
            to_fraction(True)

    def test_mode_coerce(self):
        assert EXACT.coerce("1/3") == F(1, 3)
        assert isinstance(FLOAT.coerce(F(1, 3)), float)
        assert NumericMode.from_name("exact") == EXACT
        assert NumericMode.from_name("float").exact is False

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            NumericMode.from_name("decimal")

    @given(rationals)
    def test_json_round_trip(self, x):
        assert from_json_number(to_json_number(x)) == x

    def test_json_integers_stay_integers(self):
        assert to_json_number(F(3)) == 3
        assert to_json_number(F(1, 3)) == "1/3"

    def test_format(self):
        assert format_number(F(-1, 4)) == "-1/4"
        assert format_number(F(5)) == "5"


class TestComparison:
    def test_exact_cmp_has_no_tolerance(self):
        assert cmp(F(1), F(1) + F(1, 10**30), 0) == -1

    def test_float_cmp_tolerance(self):
        assert cmp(1.0, 1.0 + 1e-12, 1e-9) == 0
        assert approx_eq(0.1 + 0.2, 0.3, 1e-9)


class TestPower:
    def test_exact_rational_root(self):
        assert power(F(1, 16), F(1, 4)) == F(1, 2)
        assert power(F(27, 8), F(2, 3)) == F(9, 4)

    def test_irrational_root_falls_back_to_float(self):
        out = power(F(1, 4), F(1, 4))
        assert isinstance(out, float)
        assert math.isclose(out, 0.5**0.5, rel_tol=0, abs_tol=1e-15)

    def test_integer_power_is_exact(self):
        assert power(F(-2, 3), F(3)) == F(-8, 27)

    def test_negative_base_fractional_exponent(self):
        with pytest.raises((DomainError, ArithmeticError)):
            power(F(-1), F(1, 2))

    @given(rationals.filter(lambda x: x >= 0), st.integers(1, 4))
    def test_root_of_power(self, x, k):
        assert power(x**k, F(1, k)) == x
