"""Representation numbers and polynomial-weighted shell sums.

``S_n(k, P)`` is the sum of ``P(m)`` over ``m`` in ``Z^n`` with ``|m|^2 = k``
(or over odd vectors, or over the shells of a diagonal form).  Whole tables
``k = 0..K`` are built by convolving one-dimensional weighted square
indicators monomial by monomial; single shells are also available by direct
enumeration, which the tests use as the oracle.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Sequence

import mpmath
import numpy as np

from weyl_lab.config import DomainError, default_digits
from weyl_lab.exact import ExactValue, exact_eval
from weyl_lab.polynomials import MultiPoly, ball_volume, evaluate, sphere_integral

INT64_SAFE = 2.0**62


# ---------------------------------------------------------------------------
# exact integer convolution helpers


def _fits(bound: float) -> bool:
    return bound < INT64_SAFE


def _to_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    out = np.empty(a.shape, dtype=object)
    out[:] = [int(v) for v in a]
    return out


def _absmax(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return float(max(abs(int(v)) for v in a))
    return float(np.abs(a).max())


def _square_weights(K: int, e: int, scale: int = 1, parity: str = "all") -> list[tuple[int, int]]:
    """Sparse ``w[s] = sum of t**e over integers t with (scale*t)**2 = s``."""
    out = []
    t = 0
    while (scale * t) ** 2 <= K:
        s = (scale * t) ** 2
        if parity == "odd" and t % 2 == 0:
            t += 1
            continue
        if t == 0:
            if e == 0:
                out.append((0, 1))
        elif e % 2 == 0:
            out.append((s, 2 * t**e))
        t += 1
    return out


def _convolve_sparse(A: np.ndarray, w: list[tuple[int, int]], K: int) -> np.ndarray:
    """``out[k] = sum_s w[s] * A[k - s]`` for ``k <= K``, exact."""
    bound = _absmax(A) * sum(abs(v) for _, v in w)
    obj = A.dtype == object or not _fits(bound)
    src = _to_object(A) if obj else A
    out = np.zeros(K + 1, dtype=object if obj else np.int64)
    if obj:
        out[:] = 0
    for s, v in w:
        if s > K:
            continue
        if v == 1:
            out[s:] += src[: K + 1 - s]
        else:
            out[s:] += src[: K + 1 - s] * v
    return out


def _axpy(acc: np.ndarray | None, c: int, T: np.ndarray) -> np.ndarray:
    if acc is None:
        bound = abs(c) * _absmax(T)
        if T.dtype == object or not _fits(bound):
            return _to_object(T) * c
        return T * c
    bound = _absmax(acc) + abs(c) * _absmax(T)
    if acc.dtype == object or T.dtype == object or not _fits(bound):
        return _to_object(acc) + _to_object(T) * c
    return acc + T * c


def _shell_table_int(P: MultiPoly, K: int, diag: Sequence[int], parity: str) -> np.ndarray:
    """Integer-coefficient P; returns the exact table as an int64/object array."""
    n = P.n_vars
    delta = np.zeros(K + 1, dtype=np.int64)
    delta[0] = 1
    memo: dict[tuple[int, ...], np.ndarray] = {(): delta}
    wcache: dict[tuple[int, int], list] = {}

    def weights(i: int, e: int):
        key = (i, e)
        if key not in wcache:
            wcache[key] = _square_weights(K, e, diag[i], parity)
        return wcache[key]

    def table(suffix: tuple[int, ...]) -> np.ndarray:
        if suffix in memo:
            return memo[suffix]
        i = n - len(suffix)
        T = _convolve_sparse(table(suffix[1:]), weights(i, suffix[0]), K)
        memo[suffix] = T
        return T

    by_first: dict[int, list[tuple[tuple[int, ...], int]]] = {}
    for e, c in P.items():
        assert c.denominator == 1
        by_first.setdefault(e[0], []).append((e[1:], int(c.numerator)))
    total = None
    for e0 in sorted(by_first):
        if e0 % 2:  # odd power of the first coordinate cancels under t -> -t
            continue
        combo = None
        for rest, c in sorted(by_first[e0]):
            if any(k % 2 for k in rest):
                continue
            combo = _axpy(combo, c, table(rest))
        if combo is None:
            continue
        part = _convolve_sparse(combo, weights(0, e0), K)
        total = _axpy(total, 1, part)
    if total is None:
        total = np.zeros(K + 1, dtype=np.int64)
    return total


def shell_values(P: MultiPoly, K: int, diag: Sequence[int] | None = None,
                 parity: str = "all") -> list:
    """Exact ``[sum over Q(m) = k of P(m) for k in 0..K]``.

    ``Q(m) = sum (diag_i * m_i)^2``; ``parity='odd'`` restricts to odd ``m``.
    """
    if parity not in ("all", "odd"):
        raise DomainError(f"parity must be 'all' or 'odd', got {parity!r}")
    if K < 0:
        raise DomainError("k_max must be >= 0")
    n = P.n_vars
    diag = tuple(diag) if diag is not None else (1,) * n
    if len(diag) != n or any(a < 1 for a in diag):
        raise DomainError("diagonal must have n_vars positive entries")
    D = P.denominator_lcm()
    Pi = P * D
    raw = _shell_table_int(Pi, K, diag, parity)
    vals = [int(v) for v in raw]
    if D == 1:
        return vals
    return [v // D if v % D == 0 else Fraction(v, D) for v in vals]


# ---------------------------------------------------------------------------
# direct enumeration


def shell_points(k: int, diag: Sequence[int], parity: str = "all") -> Iterator[tuple[int, ...]]:
    """All ``m`` with ``sum (diag_i m_i)^2 == k``, by recursive coordinate bounds."""
    n = len(diag)
    m = [0] * n

    def rec(i: int, rem: int):
        a2 = diag[i] ** 2
        top = isqrt(rem // a2)
        if i == n - 1:
            if rem % a2:
                return
            q = rem // a2
            t = isqrt(q)
            if t * t != q or (parity == "odd" and t % 2 == 0):
                return
            m[i] = t
            yield tuple(m)
            if t:
                m[i] = -t
                yield tuple(m)
            return
        for t in range(-top, top + 1):
            if parity == "odd" and t % 2 == 0:
                continue
            m[i] = t
            yield from rec(i + 1, rem - a2 * t * t)

    if k < 0:
        return
    yield from rec(0, k)


def shell_sum(n: int, k: int, P: MultiPoly | None = None, parity: str = "all"):
    P = P if P is not None else MultiPoly.constant(n)
    if P.n_vars != n:
        raise DomainError("polynomial variable count differs from n")
    return _exactify(sum((evaluate(P, m) for m in shell_points(k, (1,) * n, parity)), Fraction(0)))


def shell_sum_form(a: Sequence[int], k: int, P: MultiPoly | None = None):
    n = len(a)
    P = P if P is not None else MultiPoly.constant(n)
    if P.n_vars != n:
        raise DomainError("diagonal length differs from n_vars")
    return _exactify(sum((evaluate(P, m) for m in shell_points(k, tuple(a))), Fraction(0)))


def _exactify(q: Fraction):
    return q.numerator if q.denominator == 1 else q


# ---------------------------------------------------------------------------
# tables


@dataclass
class ShellTable:
    n: int
    parity: str
    k_max: int
    values: list = field(default_factory=list)
    poly: MultiPoly | None = None
    diag: tuple[int, ...] | None = None

    def __getitem__(self, k: int):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def cumulative(self) -> list:
        out, acc = [], 0
        for v in self.values:
            acc += v
            out.append(acc)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "value"])
        for k, v in enumerate(self.values):
            w.writerow([k, str(v)])
        return buf.getvalue()


def rep_table(n: int, k_max: int, parity: str = "all") -> ShellTable:
    if n < 1:
        raise DomainError("n must be >= 1")
    vals = shell_values(MultiPoly.constant(n), k_max, parity=parity)
    return ShellTable(n, parity, k_max, vals)


def shell_table(n: int, k_max: int, P: MultiPoly, parity: str = "all",
                diag: Sequence[int] | None = None) -> ShellTable:
    if P.n_vars != n:
        raise DomainError("polynomial variable count differs from n")
    vals = shell_values(P, k_max, diag=diag, parity=parity)
    return ShellTable(n, parity, k_max, vals, P, tuple(diag) if diag else None)


# ---------------------------------------------------------------------------
# arithmetic functions


@lru_cache(maxsize=4)
def _prime_sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytearray(len(flags[p * p::p]))
    return tuple(i for i, f in enumerate(flags) if f)


SIEVE_LIMIT = 10**6


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(k: int) -> dict[int, int]:
    if k < 1:
        raise DomainError("factorize needs k >= 1")
    out: dict[int, int] = {}
    for p in _prime_sieve(SIEVE_LIMIT):
        if p * p > k:
            break
        while k % p == 0:
            out[p] = out.get(p, 0) + 1
            k //= p
    stack = [k] if k > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _pollard_rho(m)
        stack += [f, m // f]
    return dict(sorted(out.items()))


def sigma(k: int) -> int:
    out = 1
    for p, e in factorize(k).items():
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def jacobi_r4(k: int) -> int:
    """``8 * sum of divisors of k not divisible by 4``."""
    if k < 1:
        raise DomainError("jacobi_r4 needs k >= 1")
    s = sigma(k)
    return 8 * (s - 4 * sigma(k // 4)) if k % 4 == 0 else 8 * s


def carlitz_r4_odd(k: int) -> int:
    """Representations of k as a sum of four odd squares: ``16 sigma(k/4)`` if k = 4 mod 8."""
    if k < 1:
        raise DomainError("carlitz_r4_odd needs k >= 1")
    if k % 8 != 4:
        return 0
    return 16 * sigma(k // 4)


def odd_primes(j: int) -> list[int]:
    out, p = [], 3
    while len(out) < j:
        if _is_probable_prime(p):
            out.append(p)
        p += 2
    return out


# ---------------------------------------------------------------------------
# statistics


def average_main_term(n: int, parity: str = "all") -> ExactValue:
    """Leading constant of the number of (odd) lattice points in a ball of radius R."""
    v = ball_volume(n)
    return v * Fraction(1, 2**n) if parity == "odd" else v


def average_compare(n: int, R_max: int, parity: str = "all", digits: int | None = None,
                    radii: Sequence[int] | None = None) -> list[tuple[int, int, mpmath.mpf, mpmath.mpf]]:
    """Rows ``(R, count, main, count - main)`` for integer radii ``1..R_max``."""
    if n < 2:
        raise DomainError("average_compare needs n >= 2")
    digits = digits or default_digits()
    radii = list(radii) if radii is not None else list(range(1, R_max + 1))
    K = max(radii) ** 2
    cum = rep_table(n, K, parity).cumulative()
    C = exact_eval(average_main_term(n, parity), digits)
    rows = []
    with mpmath.workdps(digits + 10):
        for R in radii:
            main = C * mpmath.mpf(R) ** n
            rows.append((R, cum[R * R], main, cum[R * R] - main))
    return rows


def average_error_points(n: int, R_max: int, parity: str = "all",
                         digits: int | None = None) -> list[tuple[float, mpmath.mpf]]:
    """``(R, count - main)`` at both one-sided limits of every jump with ``R <= R_max``.

    The lattice count only changes at ``R = sqrt(k)``, so the supremum of the
    error over any radius window is attained among these values.
    """
    digits = digits or default_digits()
    K = R_max * R_max
    table = rep_table(n, K, parity).values
    C = exact_eval(average_main_term(n, parity), digits)
    pts = []
    acc = table[0]
    with mpmath.workdps(digits + 10):
        for k in range(1, K + 1):
            if table[k] == 0:
                continue
            r = mpmath.sqrt(k)
            main = C * r**n
            pts.append((float(r), acc - main))
            acc += table[k]
            pts.append((float(r), acc - main))
    return pts


def equidist_error(n: int, k: int, P: MultiPoly, digits: int | None = None) -> mpmath.mpf:
    if not P.is_homogeneous():
        raise DomainError("equidist_error needs a homogeneous polynomial")
    digits = digits or default_digits()
    r = shell_sum(n, k)
    if r == 0:
        raise DomainError(f"empty shell: r_{n}({k}) = 0")
    S = Fraction(shell_sum(n, k, P))
    nu = max(P.degree, 0)
    mean = sphere_integral(P)
    with mpmath.workdps(digits + 10):
        val = mpmath.mpf(S.numerator) / S.denominator / (mpmath.mpf(k) ** (mpmath.mpf(nu) / 2) * r)
        return val - mpmath.mpf(mean.numerator) / mean.denominator


def extremal_constant(digits: int | None = None) -> mpmath.mpf:
    """``48 e^gamma / pi^2``."""
    digits = digits or default_digits()
    with mpmath.workdps(digits + 10):
        return 48 * mpmath.exp(mpmath.euler) / mpmath.pi**2


@dataclass
class ExtremalRatio:
    j: int
    k: int
    r4: int
    ratio: mpmath.mpf
    reference: mpmath.mpf


def r4_extremal_ratio(j: int, digits: int | None = None) -> ExtremalRatio:
    if j < 3:
        raise DomainError("r4_extremal_ratio needs j >= 3")
    digits = digits or default_digits()
    k = 1
    for p in odd_primes(j):
        k *= p
    r4 = jacobi_r4(k)
    with mpmath.workdps(digits + 10):
        ratio = mpmath.mpf(r4) / (k * mpmath.log(mpmath.log(k)))
    return ExtremalRatio(j, k, r4, ratio, extremal_constant(digits))


@dataclass
class JumpResult:
    n: int
    parity: str
    minimum: Fraction | mpmath.mpf
    argmin: int
    empty_classes: list[int]


def jump_check(n: int, k_min: int, k_max: int, parity: str = "all",
               digits: int | None = None) -> JumpResult:
    """Minimum of ``r(k) / k^(n/2 - 1)`` over nonempty shells in ``[k_min, k_max]``.

    For odd vectors only ``k = n mod 8`` can be represented; the residues
    ``k = n + 4 mod 8`` are reported in ``empty_classes`` if they are empty.
    """
    if n <= 4:
        raise DomainError("jump_check needs n > 4")
    if k_min < 1 or k_max < k_min:
        raise DomainError("empty range")
    digits = digits or default_digits()
    table = rep_table(n, k_max, parity).values
    ks = range(k_min, k_max + 1)
    if parity == "odd":
        ks = [k for k in ks if (k - n) % 8 == 0]
    best, arg = None, None
    with mpmath.workdps(digits + 10):
        half = mpmath.mpf(n) / 2 - 1
        for k in ks:
            if table[k] == 0:
                continue
            v = Fraction(table[k], k ** ((n - 2) // 2)) if n % 2 == 0 else mpmath.mpf(table[k]) / mpmath.mpf(k) ** half
            if best is None or v < best:
                best, arg = v, k
    if best is None:
        raise DomainError("no nonempty shell in range")
    empty = []
    if parity == "odd":
        mod4 = [k for k in range(k_min, k_max + 1) if (k - n) % 8 == 4]
        if all(table[k] == 0 for k in mod4):
            empty = mod4
    return JumpResult(n, parity, best, arg, empty)
