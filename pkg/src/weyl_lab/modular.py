"""Theta-series coefficients of harmonic polynomials and their growth statistics.

For ``P`` harmonic of degree ``nu > 0`` in ``n`` variables the sequence
``a_k = sum_{|m|^2 = k} P(m)`` are Fourier coefficients of a cusp form of
weight ``r = nu + n/2``.  Two consequences are checked numerically: partial
sums grow at most like ``K^(r/2) log K``, and ``K^-r sum a_k^2`` stays in a
band.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from weyl_lab.config import DomainError, default_digits
from weyl_lab.polynomials import MultiPoly, is_harmonic
from weyl_lab.shells import shell_values


@dataclass
class ThetaCoefficients:
    n: int
    poly: MultiPoly
    weight: Fraction
    k_max: int
    a: list

    @property
    def degenerate(self) -> bool:
        return all(v == 0 for v in self.a)


def theta_coeffs(n: int, P: MultiPoly, k_max: int) -> ThetaCoefficients:
    if P.n_vars != n:
        raise DomainError("polynomial variable count differs from n")
    if not P.is_homogeneous() or P.degree < 1:
        raise DomainError("theta_coeffs needs a homogeneous polynomial of degree >= 1")
    if not is_harmonic(P):
        raise DomainError("theta_coeffs needs a harmonic polynomial")
    a = shell_values(P, k_max)
    return ThetaCoefficients(n, P, Fraction(P.degree) + Fraction(n, 2), k_max, a)


def dyadic_points(k_max: int, start: int = 4) -> list[int]:
    """``start, 2*start, ...`` up to ``k_max``, with ``k_max`` appended if off-grid."""
    out, K = [], start
    while K <= k_max:
        out.append(K)
        K *= 2
    if out and out[-1] != k_max:
        out.append(k_max)
    return out


@dataclass
class StatTable:
    name: str
    weight: Fraction
    rows: list[tuple[int, mpmath.mpf]]
    degenerate: bool = False

    def value_at(self, K: int) -> mpmath.mpf:
        for k, v in self.rows:
            if k == K:
                return v
        raise KeyError(K)

    def band(self, K_min: int = 1, K_max: int | None = None) -> tuple[mpmath.mpf, mpmath.mpf]:
        vals = [v for k, v in self.rows if k >= K_min and (K_max is None or k <= K_max)]
        return min(vals), max(vals)

    def to_csv(self, digits: int = 20) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["K", "stat"])
        for K, v in self.rows:
            w.writerow([K, mpmath.nstr(v, digits)])
        return buf.getvalue()

    def summary_json(self, K_min: int = 1, digits: int = 20) -> str:
        lo, hi = self.band(K_min)
        return json.dumps({"weight": str(self.weight), "band_min": mpmath.nstr(lo, digits),
                           "band_max": mpmath.nstr(hi, digits), "degenerate": self.degenerate})


def partial_sum_stat(c: ThetaCoefficients, digits: int | None = None,
                     points: list[int] | None = None) -> StatTable:
    """``|sum_{k<=K} a_k| / (K^(r/2) log K)`` at dyadic ``K``."""
    if c.k_max < 4:
        raise DomainError("partial_sum_stat needs k_max >= 4")
    digits = digits or default_digits()
    points = points or dyadic_points(c.k_max)
    rows = []
    acc, k = Fraction(0), 0
    with mpmath.workdps(digits + 10):
        half_r = mpmath.mpf(c.weight.numerator) / (2 * c.weight.denominator)
        for K in points:
            while k < K:
                k += 1
                acc += c.a[k]
            num = abs(acc)
            rows.append((K, mpmath.mpf(num.numerator) / num.denominator
                         / (mpmath.mpf(K) ** half_r * mpmath.log(K))))
    return StatTable("partial_sum", c.weight, rows, c.degenerate)


def mean_square_stat(c: ThetaCoefficients, digits: int | None = None,
                     points: list[int] | None = None) -> StatTable:
    """``K^-r * sum_{k<=K} a_k^2`` at dyadic ``K``."""
    digits = digits or default_digits()
    points = points or dyadic_points(c.k_max, start=1)
    rows = []
    acc, k = Fraction(0), 0
    with mpmath.workdps(digits + 10):
        r = mpmath.mpf(c.weight.numerator) / c.weight.denominator
        for K in points:
            while k < K:
                k += 1
                acc += Fraction(c.a[k]) ** 2
            rows.append((K, mpmath.mpf(acc.numerator) / acc.denominator / mpmath.mpf(K) ** r))
    return StatTable("mean_square", c.weight, rows, c.degenerate)
