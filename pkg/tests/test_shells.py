from itertools import product
from math import isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_rep, brute_shell_sum
from weyl_lab.config import DomainError
from weyl_lab.polynomials import MultiPoly, evaluate, parse_poly
from weyl_lab.shells import (average_compare, average_error_points, average_main_term,
                             carlitz_r4_odd, equidist_error, extremal_constant, factorize,
                             jacobi_r4, jump_check, odd_primes, r4_extremal_ratio, rep_table,
                             shell_sum, shell_sum_form, shell_table, shell_values, sigma)

QUARTIC2 = "x1^4 - 6*x1^2*x2^2 + x2^4"


def rep_recursive(n, k_max, parity="all"):
    """r_n(k) = sum_a r_{n-1}(k - a^2), one coordinate at a time, plain dicts."""
    vals = [a for a in range(-isqrt(k_max), isqrt(k_max) + 1) if parity == "all" or a % 2]
    table = {0: 1}
    for _ in range(n):
        nxt = {}
        for s, c in table.items():
            for a in vals:
                t = s + a * a
                if t <= k_max:
                    nxt[t] = nxt.get(t, 0) + c
        table = nxt
    return [table.get(k, 0) for k in range(k_max + 1)]


def test_rep_examples():
    r4 = rep_table(4, 5).values
    assert r4[1] == 8 and r4[2] == 24
    assert rep_table(4, 4, "odd").values[4] == 16
    assert rep_table(3, 1).values[1] == 6
    assert rep_table(3, 0).values == [1]
    assert rep_table(2, 0, "odd").values == [0]


@pytest.mark.parametrize("n,k_max", [(1, 2000), (2, 2000), (3, 2000), (4, 500), (5, 150)])
@pytest.mark.parametrize("parity", ["all", "odd"])
def test_rep_vs_bruteforce(n, k_max, parity):
    assert rep_table(n, k_max, parity).values == brute_rep(n, k_max, parity)


@pytest.mark.parametrize("n", [4, 5])
@pytest.mark.parametrize("parity", ["all", "odd"])
def test_rep_vs_recursion_to_2000(n, parity):
    assert rep_table(n, 2000, parity).values == rep_recursive(n, 2000, parity)


def test_table_cumulative_is_ball_count():
    t = rep_table(2, 100)
    assert t.cumulative()[100] == 317
    text = t.to_csv()
    assert text.startswith("k,value\n0,1\n1,4\n") and "\r" not in text


def test_shell_sum_examples():
    for k in range(0, 30):
        assert shell_sum(3, k) == rep_table(3, 30).values[k]
        assert shell_sum(3, k, MultiPoly.var(1, 3)) == 0
    assert shell_sum(2, 25, parse_poly(QUARTIC2, 2)) == -1716
    assert shell_values(parse_poly(QUARTIC2, 2), 25)[25] == -1716


def test_shell_sum_form_examples():
    assert shell_sum_form((2, 1), 4) == 4
    assert shell_sum_form((2, 1), 1) == 2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 40))
def test_shell_sum_form_vs_bruteforce(a, k):
    n = len(a)
    P = MultiPoly.var(1, n) ** 2 + MultiPoly.constant(n, 1)
    top = isqrt(k)
    want = sum(evaluate(P, m) for m in product(range(-top, top + 1), repeat=n)
               if sum((ai * mi) ** 2 for ai, mi in zip(a, m)) == k)
    assert shell_sum_form(a, k, P) == want
    assert shell_values(P, 40, diag=a)[k] == want


polys3 = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)),
    st.integers(-5, 5), min_size=1, max_size=4).map(lambda t: MultiPoly(3, t))


@settings(max_examples=40, deadline=None)
@given(polys3)
def test_shell_values_vs_bruteforce(P):
    vals = shell_values(P, 30)
    for k in (0, 1, 5, 9, 14, 29, 30):
        assert vals[k] == brute_shell_sum(3, k, lambda m: evaluate(P, m))


@settings(max_examples=40, deadline=None)
@given(polys3)
def test_radial_factor_pulls_out(P):
    a = shell_values(P, 60)
    b = shell_values(MultiPoly.norm_sq(3) * P, 60)
    assert all(b[k] == k * a[k] for k in range(61))


@settings(max_examples=30, deadline=None)
@given(polys3)
def test_odd_and_antisymmetric_sums_vanish(P):
    flip = MultiPoly(3, {e: c * (-1) ** e[0] for e, c in P.items()})
    odd = P - flip  # odd under x1 -> -x1
    assert all(v == 0 for v in shell_values(odd, 40))
    swap = MultiPoly(3, {(e[1], e[0], e[2]): c for e, c in P.items()})
    anti = P - swap
    assert all(v == 0 for v in shell_values(anti, 40))


def test_shell_table_validates_vars():
    with pytest.raises(DomainError):
        shell_table(3, 10, parse_poly("x1", 2))


def test_sigma_and_factorize():
    def sigma_naive(k):
        return sum(d for d in range(1, k + 1) if k % d == 0)

    for k in range(1, 600):
        assert sigma(k) == sigma_naive(k)
    assert sigma(105) == 192
    big = 1000003 * 999983 * 7**3
    assert factorize(big) == {7: 3, 999983: 1, 1000003: 1}
    p = 2**61 - 1
    assert factorize(p) == {p: 1}
    assert factorize(p * 1000003) == {1000003: 1, p: 1}


def test_jacobi_examples():
    assert jacobi_r4(1) == 8
    assert jacobi_r4(12) == 96
    assert jacobi_r4(4) == 24


def test_carlitz_examples_bruteforce_first():
    brute = brute_rep(4, 400, "odd")
    for k in (4, 12, 20):
        assert carlitz_r4_odd(k) == brute[k]
    assert (carlitz_r4_odd(4), carlitz_r4_odd(12), carlitz_r4_odd(20)) == (16, 64, 96)
    assert all(carlitz_r4_odd(k) == brute[k] for k in range(1, 401))


def test_jacobi_vs_table_10k():
    t = rep_table(4, 10**4).values
    assert all(jacobi_r4(k) == t[k] for k in range(1, 10**4 + 1))


def test_average_examples():
    rows = average_compare(4, 1)
    R, count, main, diff = rows[0]
    assert count == 9
    with mpmath.workdps(40):
        assert abs(main - mpmath.pi**2 / 2) < 1e-30
    assert average_compare(2, 10)[-1][1] == 317
    assert average_main_term(3, "odd") * 8 == average_main_term(3)


def test_error_points_straddle_jumps():
    pts = average_error_points(2, 3)
    # at R = 1 the count goes 1 -> 5; both sides present
    at1 = [e for r, e in pts if r == 1.0]
    with mpmath.workdps(30):
        assert len(at1) == 2 and abs(at1[1] - at1[0] - 4) < 1e-20


def test_equidist_examples():
    assert equidist_error(2, 25, parse_poly(QUARTIC2, 2)) == pytest.approx(-0.2288, abs=1e-15)
    for k in (1, 2, 3, 5, 6, 9):
        assert equidist_error(3, k, MultiPoly.var(1, 3)) == 0
        assert equidist_error(3, k, MultiPoly.constant(3)) == 0
    with pytest.raises(DomainError):
        equidist_error(3, 7, MultiPoly.constant(3))


def test_extremal_examples():
    e = r4_extremal_ratio(3)
    assert (e.k, e.r4) == (105, 1536)
    assert abs(float(e.ratio) - 9.5132) < 1e-3
    e4 = r4_extremal_ratio(4)
    assert (e4.k, e4.r4) == (1155, 18432)
    assert odd_primes(5) == [3, 5, 7, 11, 13]


def test_extremal_constant_independent():
    # gamma from a direct harmonic sum plus its Euler-Maclaurin tail (error ~ N^-8)
    with mpmath.workdps(60):
        N = 10**4
        H = mpmath.fsum(mpmath.mpf(1) / j for j in range(1, N + 1))
        N = mpmath.mpf(N)
        gamma = (H - mpmath.log(N) - 1 / (2 * N) + 1 / (12 * N**2) - 1 / (120 * N**4)
                 + 1 / (252 * N**6))
        ref = 48 * mpmath.exp(gamma) / mpmath.pi**2
        assert abs(extremal_constant(40) - ref) < mpmath.mpf(10) ** -30
    assert abs(float(extremal_constant(30)) - 8.66210) < 1e-5


def test_jump_examples():
    r = jump_check(5, 1, 1000)
    assert r.minimum > 0
    assert jump_check(5, 1, 1).minimum == 10
    odd = jump_check(5, 1, 1000, "odd")
    assert (odd.argmin - 5) % 8 == 0
    assert odd.empty_classes and all((k - 5) % 8 == 4 for k in odd.empty_classes)
    with pytest.raises(DomainError):
        jump_check(4, 1, 10)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_jump_minimum_vs_table(n):
    t = brute_rep(n, 60) if n <= 5 else rep_table(n, 60).values
    want = min(t[k] / k ** ((n - 2) / 2) for k in range(1, 61) if t[k])
    assert float(jump_check(n, 1, 60).minimum) == pytest.approx(want, rel=1e-12)
