"""The eigenvalue counting function N(lambda) of SO(N).

Two independent routes:

* direct: sum squared Weyl dimensions over dominant weights (``weights``);
* lattice: sum the multiplicity polynomial over every point of ``Z^n`` (or of
  the odd vectors) in the ball of radius ``R`` and divide by the order of the
  signed-permutation group that folds the lattice onto the Weyl chamber.

The smooth main term is the exact ball integral of the multiplicity
polynomial, so the Weyl constant comes out of the lattice picture directly.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, isqrt
from typing import Sequence

import mpmath
import numpy as np

from weyl_lab.config import DomainError, default_digits
from weyl_lab.envelope import EnvelopeFit, envelope_fit
from weyl_lab.exact import ExactValue, exact_eval, format_sci
from weyl_lab.polynomials import MultiPoly, ball_integral, harmonic_decompose
from weyl_lab.shells import shell_values
from weyl_lab.weights import GroupParams, enumerate_spectrum, multiplicity


def multiplicity_poly(g: GroupParams) -> MultiPoly:
    """The multiplicity as an exact polynomial in ``x1..xn``."""
    n = g.n
    xs = [MultiPoly.var(i + 1, n) for i in range(n)]
    prod = MultiPoly.constant(n)
    den = 1
    for i in range(n):
        xi = xs[n - 1 - i]
        if not g.even:
            prod = prod * xi
            den *= 2 * i + 1
        for j in range(i + 1, n):
            xj = xs[n - 1 - j]
            prod = prod * (xj * xj - xi * xi)
            den *= (j * j - i * i) if g.even else (2 * j + 1) ** 2 - (2 * i + 1) ** 2
    prod = prod * Fraction(1, den)
    return prod * prod


# ---------------------------------------------------------------------------
# lattice sweep


def _orbit_size(x: Sequence[int]) -> int:
    """Number of distinct signed permutations of a nonnegative tuple."""
    size = factorial(len(x))
    run = 1
    for a, b in zip(x, x[1:]):
        if a == b:
            run += 1
        else:
            size //= factorial(run)
            run = 1
    size //= factorial(run)
    return size * 2 ** sum(1 for v in x if v)


def _sweep_slab(N: int, r2_max: int, lo: int, hi: int) -> list[int]:
    """Shell masses ``sum_{|x|^2 = k} m(x)`` from orbit representatives with ``lo <= x1 <= hi``."""
    from weyl_lab.weights import group_params

    g = group_params(N)
    n = g.n
    step = 1 if g.even else 2
    first = 0 if g.even else 1
    out = [0] * (r2_max + 1)
    x = [0] * n

    def rec(j: int, upper: int, budget: int):
        top = min(upper, isqrt(budget))
        if not g.even and top % 2 == 0:
            top -= 1
        if j == 0:
            top = min(top, hi)
            if not g.even and top % 2 == 0:
                top -= 1
        bottom = lo if j == 0 else first
        v = top
        while v >= bottom:
            x[j] = v
            rem = budget - v * v
            if j == n - 1:
                m = multiplicity(x, g)
                if m:
                    out[r2_max - rem] += _orbit_size(x) * m
            else:
                rec(j + 1, v, rem)
            v -= step

    rec(0, isqrt(r2_max), r2_max)
    return out


def lattice_shell_masses(g: GroupParams, r2_max: int, threads: int = 1) -> list[int]:
    """Exact ``[sum of m(x) over lattice points with |x|^2 = k, k = 0..r2_max]``.

    The lattice is ``Z^n`` for even N and the odd vectors for odd N.  The sum
    runs over sorted nonnegative representatives weighted by orbit size.
    Slabs of the leading coordinate are merged in a fixed order, so the
    result does not depend on ``threads``.
    """
    if r2_max < 0:
        return []
    top = isqrt(r2_max)
    nslabs = max(1, min(threads * 4, top + 1))
    edges = np.linspace(-1, top, nslabs + 1).round().astype(int)
    slabs = [(int(a) + 1, int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if threads > 1 and len(slabs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_sweep_slab, [g.N] * len(slabs), [r2_max] * len(slabs),
                                  [a for a, _ in slabs], [b for _, b in slabs]))
    else:
        parts = [_sweep_slab(g.N, r2_max, a, b) for a, b in slabs]
    total = [0] * (r2_max + 1)
    for part in parts:
        for k, v in enumerate(part):
            total[k] += v
    return total


def lattice_sum_bruteforce(g: GroupParams, r2: int) -> int:
    """Plain sum of m(x) over every lattice point in the ball; small radii only."""
    n = g.n
    top = isqrt(r2)
    rng = range(-top, top + 1) if g.even else range(-top | 1, top + 1, 2)
    return sum(multiplicity(x, g) for x in product(rng, repeat=n) if sum(t * t for t in x) <= r2)


def _fold(g: GroupParams, lattice_total: int) -> int:
    q, r = divmod(lattice_total, g.symmetry_order)
    if r:
        raise ArithmeticError(f"lattice sum {lattice_total} not divisible by {g.symmetry_order}")
    return q


def count_lattice(g: GroupParams, lam: int, threads: int = 1) -> int:
    lam = _as_lambda(lam)
    masses = lattice_shell_masses(g, g.radius_sq(lam), threads)
    return _fold(g, sum(masses))


def count_lattice_series(g: GroupParams, lams: Sequence[int], threads: int = 1) -> list[int]:
    lams = [_as_lambda(l) for l in lams]
    if not lams:
        return []
    masses = lattice_shell_masses(g, g.radius_sq(max(lams)), threads)
    cum = np.cumsum(np.array(masses, dtype=object))
    return [_fold(g, int(cum[g.radius_sq(l)])) for l in lams]


def count_direct(g: GroupParams, lam: int) -> int:
    lam = _as_lambda(lam)
    return enumerate_spectrum(g, lam).count_up_to(lam)


def count_direct_series(g: GroupParams, lams: Sequence[int]) -> list[int]:
    lams = [_as_lambda(l) for l in lams]
    if not lams:
        return []
    spec = enumerate_spectrum(g, max(lams)).entries
    out = []
    i, acc = 0, 0
    for lam in sorted(lams):
        while i < len(spec) and spec[i][0] <= lam:
            acc += spec[i][1]
            i += 1
        out.append((lam, acc))
    lookup = dict(out)
    return [lookup[l] for l in lams]


def _as_lambda(lam) -> int:
    lam = Fraction(lam)
    if lam < 0:
        raise DomainError("lambda must be >= 0")
    return int(lam.__floor__())


# ---------------------------------------------------------------------------
# smooth main term


@dataclass(frozen=True)
class SmoothMain:
    """``coefficient * R**power`` with ``R^2 = scale * lambda + shift``."""

    group: GroupParams
    coefficient: ExactValue
    power: int

    @property
    def leading_coefficient(self) -> ExactValue:
        """``C_d`` in ``N(lambda) ~ C_d lambda^(d/2)``."""
        s = self.group.radius_scale  # 1 or 4, so s^(d/2) is rational
        root = 1 if s == 1 else 2
        return self.coefficient * root**self.power

    @property
    def terms(self) -> list[tuple[ExactValue, Fraction]]:
        """Expansion in powers of lambda; exact when d is even, leading term only otherwise."""
        g = self.group
        if self.power % 2:
            return [(self.leading_coefficient, Fraction(self.power, 2))]
        h = self.power // 2
        out = []
        for j in range(h + 1):
            c = Fraction(_binom(h, j)) * Fraction(g.radius_scale) ** (h - j) * g.lambda_shift**j
            if c:
                out.append((self.coefficient * c, Fraction(h - j)))
        return out

    def evaluate(self, lam, digits: int | None = None) -> mpmath.mpf:
        digits = digits or default_digits()
        r2 = self.group.radius_scale * Fraction(lam) + self.group.lambda_shift
        c = exact_eval(self.coefficient, digits)
        with mpmath.workdps(digits + 10):
            R2 = mpmath.mpf(r2.numerator) / r2.denominator
            if self.power % 2 == 0:
                return c * R2 ** (self.power // 2)
            return c * mpmath.sqrt(R2) ** self.power


def _binom(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k))


def smooth_main(g: GroupParams) -> SmoothMain:
    """Exact ball integral of the multiplicity polynomial, folded onto the chamber.

    Odd vectors have density ``2^-n``, so the odd case carries an extra factor.
    """
    m = multiplicity_poly(g)
    coef, power = ball_integral(m)
    fold = Fraction(1, g.symmetry_order)
    if not g.even:
        fold /= 2**g.n
    return SmoothMain(g, coef * fold, power)


# ---------------------------------------------------------------------------
# radial decomposition


@dataclass
class RadialDecomposition:
    group: GroupParams
    components: list[tuple[int, MultiPoly]]

    def reconstruct(self) -> MultiPoly:
        r2 = MultiPoly.norm_sq(self.group.n)
        out = MultiPoly(self.group.n)
        for l, H in self.components:
            out = out + (r2**l) * H
        return out

    def shell_series(self, r2_max: int) -> list:
        """``sum_j k^(l_j) S(k, P_j)`` for ``k = 0..r2_max`` (exact)."""
        parity = "all" if self.group.even else "odd"
        total = [Fraction(0)] * (r2_max + 1)
        for l, H in self.components:
            vals = shell_values(H, r2_max, parity=parity)
            for k, v in enumerate(vals):
                if v:
                    total[k] += k**l * v
        return [int(v) if v.denominator == 1 else v for v in total]

    def check(self, r2_max: int, threads: int = 1) -> list[int]:
        """Radii squared in ``0..r2_max`` where the cumulative identity fails."""
        lhs = np.cumsum(np.array(lattice_shell_masses(self.group, r2_max, threads), dtype=object))
        rhs = np.cumsum(np.array(self.shell_series(r2_max), dtype=object))
        return [k for k in range(r2_max + 1) if lhs[k] != rhs[k]]


def radial_decomposition(g: GroupParams) -> RadialDecomposition:
    dec = harmonic_decompose(multiplicity_poly(g))
    return RadialDecomposition(g, list(dec.components))


# ---------------------------------------------------------------------------
# error series and envelope fits


@dataclass
class ErrorSeries:
    group: GroupParams
    digits: int
    rows: list[tuple[int, int, mpmath.mpf, mpmath.mpf]] = field(default_factory=list)

    def shifted(self, lam: int) -> Fraction:
        """``lambda + |rho|^2``, i.e. ``R^2 / scale``: the Casimir-shifted parameter."""
        g = self.group
        return Fraction(g.radius_sq(lam), g.radius_scale)

    def points(self, shifted: bool = True) -> list[tuple[float, mpmath.mpf]]:
        if shifted:
            return [(float(self.shifted(lam)), err) for lam, _, _, err in self.rows]
        return [(lam, err) for lam, _, _, err in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "count", "smooth", "error"])
        for lam, count, smooth, err in self.rows:
            w.writerow([lam, str(count), format_sci(smooth, self.digits), format_sci(err, self.digits)])
        return buf.getvalue()


def error_series(g: GroupParams, lam_max: int, step: int = 1, digits: int | None = None,
                 threads: int = 1) -> ErrorSeries:
    if lam_max < 1 or step < 1:
        raise DomainError("need lambda_max >= 1 and step >= 1")
    digits = digits or default_digits()
    lams = list(range(step, lam_max + 1, step))
    counts = count_lattice_series(g, lams, threads)
    sm = smooth_main(g)
    rows = []
    for lam, c in zip(lams, counts):
        s = sm.evaluate(lam, digits)
        with mpmath.workdps(digits + 10):
            rows.append((lam, c, s, c - s))
    return ErrorSeries(g, digits, rows)


def fit_error_series(es: ErrorSeries, shifted: bool = True) -> EnvelopeFit:
    """Envelope fit of an error series.

    By default windows and midpoints live in the shifted parameter
    ``lambda + |rho|^2``; in plain ``lambda`` the first windows are dominated
    by the constant shift and bend the fit.
    """
    floor: dict[int, object] = {}
    with mpmath.workdps(es.digits + 10):
        for (t, _), (_, _, smooth, _) in zip(es.points(shifted), es.rows):
            j = int(t).bit_length() - 1
            u = abs(smooth) * mpmath.mpf(10) ** (-es.digits)
            if j not in floor or u > floor[j]:
                floor[j] = u
        return envelope_fit(es.points(shifted), ulp_floor=floor)
