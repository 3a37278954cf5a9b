from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl_lab.exact import (ExactValue, exact_add, exact_eval, exact_mul, format_fixed,
                            format_fraction, format_sci, parse_fraction)

half = ExactValue.rational(Fraction(1, 2))
pi = ExactValue.pi_power(1)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)
values = st.dictionaries(st.integers(0, 4), fractions, max_size=4).map(ExactValue)


def test_add_examples():
    assert exact_add(half, half) == ExactValue.rational(1)
    assert exact_add(pi, ExactValue()) == pi
    assert exact_add(ExactValue.pi_power(1, Fraction(1, 6)),
                     ExactValue.pi_power(1, Fraction(1, 3))) == ExactValue.pi_power(1, Fraction(1, 2))


def test_mul_examples():
    assert exact_mul(ExactValue.pi_power(1, Fraction(1, 2)), ExactValue.pi_power(1, 2)) == ExactValue.pi_power(2)
    assert exact_mul(pi * Fraction(1, 24), ExactValue.rational(24)) == pi
    v = ExactValue({0: 3, 2: Fraction(-1, 7)})
    assert exact_mul(v, ExactValue.rational(1)) == v


def test_zero_terms_not_stored():
    v = ExactValue({1: 1}) - ExactValue({1: 1})
    assert v.is_zero() and v == ExactValue()


def test_eval_render():
    assert format_fixed(exact_eval(half, 10), 10) == "0.5000000000"
    assert format_fixed(exact_eval(pi, 15), 15) == "3.14159265358979"
    assert format_fixed(exact_eval(pi * Fraction(1, 24), 10), 10) == "0.1308996939"


def test_eval_independent_constant():
    # pi^2/6 against zeta(2) summed by mpmath's own routine
    with mpmath.workdps(60):
        ref = mpmath.zeta(2)
        got = exact_eval(ExactValue.pi_power(2, Fraction(1, 6)), 50)
        assert abs(got - ref) < mpmath.mpf(10) ** -55


def test_half_even_rounding():
    assert format_fixed(Fraction(1, 8), 2) == "0.12"
    assert format_fixed(Fraction(3, 8), 2) == "0.38"
    assert format_fixed(Fraction(999, 1000), 2) == "1.0"
    assert format_sci(Fraction(-12345, 1), 3) == "-1.23e+4"
    assert format_sci(0, 3) == "0.00e+0"
    assert format_sci(mpmath.mpf(-0.0999), 1) == "-1e-1"
    assert format_fixed(-mpmath.pi, 6) == "-3.14159"


@settings(max_examples=100, deadline=None)
@given(st.floats(-1e12, 1e12, allow_nan=False), st.integers(1, 17))
def test_render_matches_python_rounding(x, d):
    # Python's own repr-based formatting rounds the exact binary value half-even too
    assert float(format_sci(mpmath.mpf(x), d)) == float(f"{x:.{d - 1}e}")


def test_fraction_text_roundtrip():
    for q in (Fraction(14, 41), Fraction(-3), Fraction(55, 82)):
        assert parse_fraction(format_fraction(q)) == q
    assert format_fraction(Fraction(6, 2)) == "3"


@settings(max_examples=60, deadline=None)
@given(values, values, st.integers(20, 60))
def test_add_eval_roundtrip(a, b, d):
    with mpmath.workdps(d + 20):
        lhs = exact_eval(exact_add(a, b), d)
        rhs = exact_eval(a, d + 5) + exact_eval(b, d + 5)
        scale = max(abs(lhs), abs(rhs), mpmath.mpf(1))
        assert abs(lhs - rhs) <= mpmath.mpf(10) ** (2 - d) * scale


@settings(max_examples=80, deadline=None)
@given(values, values, values)
def test_distributive(a, b, c):
    assert exact_mul(a, exact_add(b, c)) == exact_add(exact_mul(a, b), exact_mul(a, c))


@settings(max_examples=50, deadline=None)
@given(values, values)
def test_mul_commutes_and_hash(a, b):
    assert exact_mul(a, b) == exact_mul(b, a)
    assert hash(exact_mul(a, b)) == hash(exact_mul(b, a))


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        ExactValue({-1: 1})
