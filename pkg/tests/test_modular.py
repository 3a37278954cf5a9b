import json
from fractions import Fraction

import mpmath
import pytest

from conftest import brute_shell_sum
from weyl_lab.config import DomainError
from weyl_lab.polynomials import evaluate, parse_poly
from weyl_lab.modular import (dyadic_points, mean_square_stat, partial_sum_stat, theta_coeffs)

QUARTIC2 = "x1^4 - 6*x1^2*x2^2 + x2^4"


def test_requires_harmonic_homogeneous():
    with pytest.raises(DomainError):
        theta_coeffs(2, parse_poly("x1^2 + x2^2", 2), 10)
    with pytest.raises(DomainError):
        theta_coeffs(2, parse_poly("x1^2 - x2^2 + x1", 2), 10)
    with pytest.raises(DomainError):
        theta_coeffs(2, parse_poly("1", 2), 10)
    with pytest.raises(DomainError):
        theta_coeffs(3, parse_poly(QUARTIC2, 2), 10)


def test_coefficients_are_shell_sums():
    P = parse_poly(QUARTIC2, 2)
    c = theta_coeffs(2, P, 60)
    assert c.weight == 5 and c.a[0] == 0
    for k in range(61):
        assert c.a[k] == brute_shell_sum(2, k, lambda m: evaluate(P, m))


def test_zero_sequence_degenerate():
    c = theta_coeffs(2, parse_poly("x1*x2", 2), 64)
    assert c.degenerate
    for table in (partial_sum_stat(c), mean_square_stat(c)):
        assert table.degenerate
        assert all(v == 0 for _, v in table.rows)


def test_partial_sum_definition_at_4():
    c = theta_coeffs(2, parse_poly(QUARTIC2, 2), 4)
    t = partial_sum_stat(c, points=[4])
    with mpmath.workdps(50):
        want = abs(sum(c.a[1:5])) / (mpmath.mpf(4) ** (mpmath.mpf(5) / 2) * mpmath.log(4))
        assert abs(t.value_at(4) - want) < mpmath.mpf(10) ** -40


def test_mean_square_at_1():
    P = parse_poly(QUARTIC2, 4)
    c = theta_coeffs(4, P, 1)
    assert c.a[1] == 4 and c.weight == 6
    assert mean_square_stat(c, points=[1]).value_at(1) == 16


def test_dyadic_points():
    assert dyadic_points(100) == [4, 8, 16, 32, 64, 100]
    assert dyadic_points(64, start=1) == [1, 2, 4, 8, 16, 32, 64]


def test_band_and_serialization():
    c = theta_coeffs(2, parse_poly(QUARTIC2, 2), 2**12)
    ms = mean_square_stat(c, 30)
    lo, hi = ms.band(2**10)
    assert 0 < lo <= hi
    doc = json.loads(ms.summary_json(2**10))
    assert doc["weight"] == "5" and not doc["degenerate"]
    assert ms.to_csv().startswith("K,stat\n")


def test_half_integer_weight():
    c = theta_coeffs(3, parse_poly(QUARTIC2, 3), 50)
    assert c.weight == Fraction(11, 2)
    assert not c.degenerate
