from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_count
from weyl_lab.config import DomainError, PrecisionError
from weyl_lab.counting import (count_direct, count_direct_series, count_lattice,
                               count_lattice_series, error_series, fit_error_series,
                               lattice_shell_masses, lattice_sum_bruteforce, multiplicity_poly,
                               radial_decomposition, smooth_main)
from weyl_lab.envelope import dyadic_suprema, envelope_fit
from weyl_lab.exact import ExactValue
from weyl_lab.polynomials import evaluate, parse_poly
from weyl_lab.weights import enumerate_spectrum, group_params, multiplicity


@pytest.mark.parametrize("N,lam,want", [(4, 4, 35), (4, 3, 17), (3, 2, 10), (2, 4, 5), (5, 4, 26)])
def test_count_examples(N, lam, want):
    g = group_params(N)
    assert count_direct(g, lam) == want
    assert count_lattice(g, lam) == want


@pytest.mark.parametrize("N", range(2, 12))
def test_count_at_zero(N):
    g = group_params(N)
    assert count_direct(g, 0) == count_lattice(g, 0) == 1


@pytest.mark.parametrize("N,lam", [(2, 50), (3, 50), (4, 40), (5, 30), (6, 25), (7, 20), (8, 14), (9, 12)])
def test_counts_vs_root_system_oracle(N, lam):
    g = group_params(N)
    want = [brute_count(N, l) for l in range(lam + 1)]
    assert count_direct_series(g, range(lam + 1)) == want
    assert count_lattice_series(g, range(lam + 1)) == want


def test_lattice_sum_140():
    g = group_params(4)
    assert lattice_sum_bruteforce(g, 5) == 140
    assert sum(lattice_shell_masses(g, 5)) == 140


@pytest.mark.parametrize("N,r2", [(4, 40), (5, 60), (6, 20), (7, 40), (8, 12), (9, 40)])
def test_orbit_sweep_vs_full_bruteforce(N, r2):
    g = group_params(N)
    masses = lattice_shell_masses(g, r2)
    acc = 0
    for k in range(r2 + 1):
        acc += masses[k]
        assert acc == lattice_sum_bruteforce(g, k)


@pytest.mark.parametrize("N", [4, 7])
def test_threads_do_not_change_result(N):
    g = group_params(N)
    assert lattice_shell_masses(g, 300, threads=1) == lattice_shell_masses(g, 300, threads=3)


def test_multiplicity_poly_matches_function():
    for N in (4, 5, 6, 7):
        g = group_params(N)
        m = multiplicity_poly(g)
        pts = [(5, 3, 1), (7, 2, 1), (4, 1, 3)] if g.even else [(5, 3, 1), (7, 1, 3), (9, -5, 1)]
        for x in (p[: g.n] for p in pts):
            assert evaluate(m, x) == multiplicity(x, g)


def test_smooth_main_constants():
    assert smooth_main(group_params(4)).leading_coefficient == ExactValue.pi_power(1, Fraction(1, 24))
    assert smooth_main(group_params(3)).leading_coefficient == ExactValue.rational(Fraction(4, 3))
    assert smooth_main(group_params(2)).leading_coefficient == ExactValue.rational(2)


def test_smooth_main_so3_closed_form():
    sm = smooth_main(group_params(3))
    with mpmath.workdps(60):
        for lam in (0, 1, 7, 1000):
            want = mpmath.mpf(4 * lam + 1) ** mpmath.mpf(1.5) / 6
            assert abs(sm.evaluate(lam, 50) - want) < mpmath.mpf(10) ** -45


def test_smooth_main_so4_expansion():
    # (pi/24) (lam+1)^3 expanded by hand
    sm = smooth_main(group_params(4))
    with mpmath.workdps(60):
        for lam in (0, 3, 250):
            want = mpmath.pi / 24 * (lam + 1) ** 3
            assert abs(sm.evaluate(lam, 50) - want) < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("N,lam", [(4, 20000), (6, 3000), (7, 2000)])
def test_weyl_constant_vs_counts(N, lam):
    # leading term dominates: relative gap of order lam^-1 (lam^-1 log lam for n = 4)
    g = group_params(N)
    c = count_lattice(g, lam)
    s = smooth_main(g).evaluate(lam, 30)
    assert abs(c / s - 1) < 20 / mpmath.mpf(lam) ** 0.5


def test_radial_examples():
    g = group_params(4)
    dec = radial_decomposition(g)
    comps = dict(dec.components)
    assert comps[2] == parse_poly("1/2", 2)
    assert comps[0] == parse_poly("(1/2)*(x1^4 - 6*x1^2*x2^2 + x2^4)", 2)
    assert dec.reconstruct() == multiplicity_poly(g)
    assert sum(dec.shell_series(5)) == 140
    assert dec.check(120) == []


@pytest.mark.parametrize("N", [6, 8])
def test_radial_check_small(N):
    assert radial_decomposition(group_params(N)).check(60) == []


@pytest.mark.parametrize("N", [5, 7])
def test_radial_check_odd_lattice(N):
    assert radial_decomposition(group_params(N)).check(120) == []


def test_error_series_so3_closed_form():
    es = error_series(group_params(3), 300, digits=40)
    with mpmath.workdps(50):
        for lam, count, smooth, err in es.rows:
            L = max(l for l in range(40) if l * (l + 1) <= lam)
            assert count == (L + 1) * (2 * L + 1) * (2 * L + 3) // 3
            assert abs(err - (count - mpmath.mpf(4 * lam + 1) ** 1.5 / 6)) < mpmath.mpf(10) ** -35


def test_error_series_jumps_are_multiplicities():
    g = group_params(6)
    es = error_series(g, 60)
    counts = {lam: c for lam, c, _, _ in es.rows}
    spec = dict(enumerate_spectrum(g, 60).entries)
    for lam in range(2, 61):
        assert counts[lam] - counts[lam - 1] == spec.get(lam, 0)
    text = es.to_csv()
    assert text.startswith("lambda,count,smooth,error\n") and "\r" not in text


def test_envelope_synthetic():
    pts = [(t, 3.0) for t in range(1, 5000)]
    assert abs(envelope_fit(pts).slope) < 1e-12
    pts = [(t, t**2.5 * (1 + 0.5 * mpmath.cos(t))) for t in range(64, 2**13)]
    assert abs(envelope_fit(pts).slope - 2.5) < 0.05
    with pytest.raises(DomainError):
        envelope_fit([(t, 1.0) for t in range(1, 8)])
    sup = dyadic_suprema([(1, -2), (1.5, 1), (2, 5), (3.9, -7)])
    assert sup == {0: 2, 1: 7}


def test_envelope_precision_guard():
    pts = [(t, 1e-30) for t in range(1, 200)]
    with pytest.raises(PrecisionError):
        envelope_fit(pts, ulp_floor={j: 1e-25 for j in range(10)})


def test_so3_slope_near_one():
    fit = fit_error_series(error_series(group_params(3), 20000, digits=40))
    assert abs(fit.slope - 1.0) < 0.1


def test_low_precision_detected():
    es = error_series(group_params(6), 200, digits=20)
    # 20 digits still resolves these errors; the guard only fires when it cannot
    fit_error_series(es)
    es.digits = 1
    with pytest.raises(PrecisionError):
        fit_error_series(es)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 9), st.integers(0, 40))
def test_dual_route_property(N, lam):
    g = group_params(N)
    assert count_direct(g, lam) == count_lattice(g, lam)


def test_fractional_lambda_floors():
    g = group_params(4)
    assert count_lattice(g, Fraction(19, 4)) == count_lattice(g, 4)
