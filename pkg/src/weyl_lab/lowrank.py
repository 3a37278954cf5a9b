"""Rank one and rank two: closed forms, Sonin summation, the SO(4) split,
sawtooth majorants and exponent-pair bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, floor, isqrt
from typing import Sequence

import mpmath
import numpy as np

from weyl_lab.config import DomainError, default_digits
from weyl_lab.envelope import EnvelopeFit, envelope_fit
from weyl_lab.polynomials import MultiPoly, partial
from weyl_lab.shells import average_error_points


def so2_count(lam: int) -> int:
    if lam < 0:
        raise DomainError("lambda must be >= 0")
    return 2 * isqrt(lam) + 1


def so3_count(lam: int) -> int:
    if lam < 0:
        raise DomainError("lambda must be >= 0")
    L = (isqrt(4 * lam + 1) - 1) // 2  # largest l with l(l+1) <= lam
    return (L + 1) * (2 * L + 1) * (2 * L + 3) // 3


# ---------------------------------------------------------------------------
# univariate helpers (ascending Fraction coefficient lists)


def psi(t):
    """Sawtooth ``t - floor(t) - 1/2``."""
    if isinstance(t, (int, Fraction)):
        return t - floor(t) - Fraction(1, 2)
    return t - mpmath.floor(t) - mpmath.mpf(1) / 2


def _coeffs(f: MultiPoly) -> list[Fraction]:
    if f.n_vars != 1:
        raise DomainError("expected a polynomial in one variable")
    deg = max(f.degree, 0)
    out = [Fraction(0)] * (deg + 1)
    for (k,), c in f.items():
        out[k] = c
    return out


def _peval(c: Sequence, t):
    acc = 0
    for a in reversed(c):
        acc = acc * t + a
    return acc


def _pint(c: Sequence[Fraction]) -> list[Fraction]:
    return [Fraction(0)] + [a / (k + 1) for k, a in enumerate(c)]


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2``."""
    if m == 0:
        return Fraction(1)
    return -sum(comb(m + 1, k) * _bernoulli(k) for k in range(m)) / (m + 1)


@lru_cache(maxsize=None)
def _faulhaber(s: int) -> tuple[Fraction, ...]:
    """Coefficients of ``F`` with ``F(N) = sum_{j=0}^{N-1} j^s`` for every integer N."""
    c = [Fraction(0)] * (s + 2)
    for i in range(s + 1):
        c[s + 1 - i] += Fraction(comb(s + 1, i)) * _bernoulli(i) / (s + 1)
    return tuple(c)


def _power_sum(s: int, A: int, B: int) -> Fraction:
    """``sum_{j=A}^{B-1} j^s``."""
    F = _faulhaber(s)
    return _peval(F, B) - _peval(F, A)


def _unit_psi_profile(g: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of ``h(j) = integral_0^1 (u - 1/2) g(j + u) du``."""
    h = [Fraction(0)] * max(len(g), 1)
    for p, cp in enumerate(g):
        if not cp:
            continue
        for q in range(1, p + 1):
            h[p - q] += cp * comb(p, q) * Fraction(q, 2 * (q + 1) * (q + 2))
    return h


def psi_integral_int(g: Sequence[Fraction], A: int, B: int) -> Fraction:
    """``integral_A^B psi(t) g(t) dt`` for integers ``A <= B``, exactly."""
    h = _unit_psi_profile(g)
    return sum((c * _power_sum(s, A, B) for s, c in enumerate(h) if c), Fraction(0))


def psi_integral(g: Sequence[Fraction], a: Fraction, b: Fraction) -> Fraction:
    """``integral_a^b psi(t) g(t) dt`` for rationals ``a <= b``, exactly."""
    a, b = Fraction(a), Fraction(b)
    if a > b:
        return -psi_integral(g, b, a)
    fa, fb = floor(a), floor(b)
    if fa == fb:
        return _fragment(g, fa, a, b)
    total = _fragment(g, fa, a, Fraction(fa + 1))
    total += psi_integral_int(g, fa + 1, fb)
    total += _fragment(g, fb, Fraction(fb), b)
    return total


def _fragment(g: Sequence[Fraction], j: int, u, v):
    """``integral_u^v (t - j - 1/2) g(t) dt`` with ``j <= u <= v <= j + 1``."""
    G = _pint(_pmul([-Fraction(2 * j + 1, 2), Fraction(1)], list(g)))
    return _peval(G, v) - _peval(G, u)


@dataclass
class SoninResult:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def sonin_sum(f: MultiPoly, a, b) -> SoninResult:
    """Both sides of ``sum_{a<n<=b} f(n) = psi(a)f(a) - psi(b)f(b) + int_a^b (f + psi f')``."""
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise DomainError("need a <= b")
    c = _coeffs(f)
    lhs = sum((_peval(c, Fraction(k)) for k in range(floor(a) + 1, floor(b) + 1)), Fraction(0))
    F = _pint(c)
    dc = _coeffs(partial(f, 0)) if f.degree >= 1 else [Fraction(0)]
    rhs = (psi(a) * _peval(c, a) - psi(b) * _peval(c, b)
           + _peval(F, b) - _peval(F, a) + psi_integral(dc, a, b))
    return SoninResult(lhs, rhs)


# ---------------------------------------------------------------------------
# SO(4): N = T1 + T2 + T3


class SurdSum:
    """``q0 + sum q_s * sqrt(s)`` with rational ``q`` and integer ``s >= 0``."""

    def __init__(self):
        self.rational = Fraction(0)
        self.surds: dict[int, Fraction] = {}

    def add(self, q, s: int | None = None):
        if s is None:
            self.rational += q
            return
        r = isqrt(s)
        if r * r == s:
            self.rational += q * r
        else:
            self.surds[s] = self.surds.get(s, Fraction(0)) + q

    def evaluate(self, digits: int) -> mpmath.mpf:
        with mpmath.workdps(digits + 10):
            total = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            for s in sorted(self.surds):
                q = self.surds[s]
                if q:
                    total += mpmath.mpf(q.numerator) / q.denominator * mpmath.sqrt(s)
            return total


def _reduce_odd_even(poly: Sequence[Fraction], s: int) -> tuple[Fraction, Fraction]:
    """Write ``poly(Y)`` as ``alpha + beta*Y`` using ``Y^2 = s``."""
    alpha = beta = Fraction(0)
    for k, c in enumerate(poly):
        if k % 2 == 0:
            alpha += c * s ** (k // 2)
        else:
            beta += c * s ** (k // 2)
    return alpha, beta


@dataclass
class TSplit:
    lam: int
    R2: int
    T1: mpmath.mpf
    T2: mpmath.mpf
    T3: mpmath.mpf
    N: int
    digits: int

    @property
    def defect(self) -> mpmath.mpf:
        with mpmath.workdps(self.digits + 10):
            return abs(self.T1 + self.T2 + self.T3 - self.N)

    @property
    def t3_over_r4(self) -> mpmath.mpf:
        with mpmath.workdps(self.digits + 10):
            return self.T3 / mpmath.mpf(self.R2) ** 2


def t_split(lam: int, digits: int | None = None, N: int | None = None) -> TSplit:
    """Sonin split of the SO(4) count, row by row in ``x``.

    For fixed ``x`` the ``y``-sum over ``(x, Y]``, ``Y = sqrt(R^2 - x^2)``, of
    ``f(y) = (x^2 - y^2)^2`` equals
    ``-psi(Y) f(Y) + int_x^Y f + int_x^Y psi f'`` (``f(x) = 0``).  The three
    pieces summed over rows with weight 2 (1 for ``x = 0``) give T2, T1, T3.
    Everything is rational except ``Y``, and ``Y^2`` is an integer, so every
    piece is an exact surd sum until the final evaluation.
    """
    if lam < 0:
        raise DomainError("lambda must be >= 0")
    digits = digits or default_digits()
    R2 = lam + 1
    T1, T2, T3 = SurdSum(), SurdSum(), SurdSum()
    x = 0
    while 2 * x * x <= R2:
        w = 1 if x == 0 else 2
        s = R2 - x * x  # Y^2
        x2 = x * x
        # T1: int_x^Y (x^2 - y^2)^2 dy
        f = [Fraction(x2 * x2), Fraction(0), Fraction(-2 * x2), Fraction(0), Fraction(1)]
        F = _pint(f)
        al, be = _reduce_odd_even(F, s)
        T1.add(w * (al - _peval(F, x)))
        T1.add(w * be, s)
        # T2: -psi(Y) f(Y), f(Y) = (R^2 - 2x^2)^2
        fy = Fraction((R2 - 2 * x2) ** 2)
        fl = isqrt(s)
        T2.add(-w * fy, s)
        T2.add(w * fy * (fl + Fraction(1, 2)))
        # T3: int_x^Y psi(y) (4y^3 - 4x^2 y) dy
        g = [Fraction(0), Fraction(-4 * x2), Fraction(0), Fraction(4)]
        T3.add(w * psi_integral_int(g, x, fl))
        G = _pint(_pmul([-Fraction(2 * fl + 1, 2), Fraction(1)], g))
        al, be = _reduce_odd_even(G, s)
        T3.add(w * (al - _peval(G, fl)))
        T3.add(w * be, s)
        x += 1
    if N is None:
        from weyl_lab.counting import count_lattice
        from weyl_lab.weights import group_params

        N = count_lattice(group_params(4), lam)
    out = TSplit(lam, R2, T1.evaluate(digits), T2.evaluate(digits), T3.evaluate(digits), N, digits)
    return out


# ---------------------------------------------------------------------------
# sawtooth majorants


@dataclass
class TrigPolynomial:
    """``sum_{|m|<=M} a_m e(mx)``, real-valued: ``a_{-m} = conj(a_m)``.

    ``a0`` is exact; ``a[m-1]`` holds ``a_m`` for ``m = 1..M`` as mpc.
    """

    M: int
    a0: Fraction
    a: list

    def coefficient(self, m: int):
        if m == 0:
            return self.a0
        if abs(m) > self.M:
            return 0
        c = self.a[abs(m) - 1]
        return c if m > 0 else mpmath.conj(c)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, float(self.a0))
        for m, c in enumerate(self.a, start=1):
            z = complex(c)
            ph = 2 * np.pi * m * x
            out += 2 * (z.real * np.cos(ph) - z.imag * np.sin(ph))
        return out


def vaaler_weight(t) -> mpmath.mpf:
    """``J(t) = pi t (1 - |t|) cot(pi t) + |t|`` on ``0 < |t| < 1``."""
    t = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
    return mpmath.pi * t * (1 - abs(t)) * mpmath.cot(mpmath.pi * t) + abs(t)


def psi_majorants(M: int, digits: int = 30) -> tuple[TrigPolynomial, TrigPolynomial]:
    """Degree-``M`` trigonometric polynomials with ``Q_minus <= psi <= Q_plus``.

    Vaaler's approximation ``-sum J(m/(M+1)) sin(2 pi m x) / (pi m)`` is
    within half a normalized Fejer kernel of ``psi``; adding and subtracting
    that kernel gives the pair.
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    plus, minus = [], []
    with mpmath.workdps(digits + 10):
        for m in range(1, M + 1):
            t = mpmath.mpf(m) / (M + 1)
            v = -vaaler_weight(t) / (2j * mpmath.pi * m)
            fej = mpmath.mpf(M + 1 - m) / (2 * (M + 1) ** 2)
            plus.append(mpmath.mpc(v) + fej)
            minus.append(mpmath.mpc(v) - fej)
    half = Fraction(1, 2 * (M + 1))
    return TrigPolynomial(M, half, plus), TrigPolynomial(M, -half, minus)


SANDWICH_SLACK = 1e-12  # float64 evaluation of <= 2M+1 unit-size terms


def sandwich_violations(M: int, grid: int = 10**5) -> dict:
    qp, qm = psi_majorants(M)
    x = np.arange(grid) / grid
    ps = x - np.floor(x) - 0.5
    up, lo = qp(x), qm(x)
    return {
        "M": M,
        "grid": grid,
        "upper_violations": int(np.sum(up < ps - SANDWICH_SLACK)),
        "lower_violations": int(np.sum(lo > ps + SANDWICH_SLACK)),
        "a0_gap": qp.a0 - qm.a0,
        "max_gap": float(np.max(up - lo)),
        "mean_gap": float(np.mean(up - lo)),
    }


# ---------------------------------------------------------------------------
# exponent pairs


@dataclass(frozen=True)
class ExponentPair:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = Fraction(self.alpha), Fraction(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if not (0 <= a <= Fraction(1, 2) <= b <= 1):
            raise DomainError(f"({a}, {b}) outside 0 <= alpha <= 1/2 <= beta <= 1")


@dataclass(frozen=True)
class ExponentPairResult:
    M_exponent: Fraction
    T2_exponent: Fraction
    weyl_deficit: Fraction
    degenerate: bool

    def __str__(self):
        from weyl_lab.exact import format_fraction

        return " ".join(format_fraction(q) for q in (self.M_exponent, self.T2_exponent, self.weyl_deficit))


def exponent_pair_calc(p: ExponentPair, d: int = 6) -> ExponentPairResult:
    """Balance ``M^alpha R^(beta+4)`` against ``M^-1 R^5`` for SO(4).

    Returns the optimal ``M`` exponent, the resulting ``R`` exponent of T2 and
    the saving ``d/2 - T2_exponent/2`` in the power of lambda.
    """
    a, b = p.alpha, p.beta
    if 1 + a <= 0:
        raise DomainError("need 1 + alpha > 0")
    m_exp = (1 - b) / (1 + a)
    t2 = a * m_exp + b + 4
    return ExponentPairResult(m_exp, t2, Fraction(d, 2) - t2 / 2, b == 1)


# ---------------------------------------------------------------------------
# three squares on average


@dataclass
class R3Fit:
    parity: str
    R_max: int
    fit: EnvelopeFit
    comparison: Fraction = Fraction(21, 16)

    @property
    def slope(self) -> float:
        return self.fit.slope


def r3_average_fit(R_max: int, parity: str = "all", digits: int | None = None) -> R3Fit:
    """Envelope slope of ``sum_{k<=R^2} r_3(k) - C R^3`` (``C = 4pi/3``, or ``pi/6`` for odd vectors)."""
    if R_max * R_max < 2**14:
        raise DomainError("r3_average_fit needs R_max^2 >= 2^14")
    pts = average_error_points(3, R_max, parity, digits or 40)
    return R3Fit(parity, R_max, envelope_fit(pts))
