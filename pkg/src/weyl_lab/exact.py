"""Exact sums of rational multiples of powers of pi, and decimal rendering.

Every ball or sphere integral of a rational polynomial reduces to a rational
multiple of an integer power of pi, so main terms can be carried exactly and
only rounded at the very end.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping, Union

import mpmath

from weyl_lab.config import default_digits

Rational = Fraction
Scalar = Union[int, Fraction]

GUARD_DIGITS = 10


class ExactValue:
    """Finite formal sum ``sum_e q_e * pi**e`` with rational ``q_e``.

    Immutable; zero coefficients are never stored, so structural equality is
    value equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, q in items:
            if e < 0:
                raise ValueError("pi exponents must be nonnegative")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(q)
        self._terms = tuple(sorted((e, q) for e, q in acc.items() if q != 0))

    @classmethod
    def rational(cls, q: Scalar) -> "ExactValue":
        return cls({0: q})

    @classmethod
    def pi_power(cls, e: int, q: Scalar = 1) -> "ExactValue":
        return cls({e: q})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactValue(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return ExactValue((e, -q) for e, q in self._terms)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactValue(
            (e1 + e2, q1 * q2) for e1, q1 in self._terms for e2, q2 in other._terms
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        if not self._terms:
            return "ExactValue(0)"
        parts = []
        for e, q in self._terms:
            parts.append(f"({q})" if e == 0 else f"({q})*pi^{e}")
        return "ExactValue(" + " + ".join(parts) + ")"

    def evaluate(self, digits: int | None = None) -> mpmath.mpf:
        return exact_eval(self, digits)


def _coerce(x):
    if isinstance(x, ExactValue):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactValue.rational(x)
    return NotImplemented


def exact_add(a: ExactValue, b: ExactValue) -> ExactValue:
    return _coerce(a) + _coerce(b)


def exact_mul(a: ExactValue, b: ExactValue) -> ExactValue:
    return _coerce(a) * _coerce(b)


def exact_eval(v: ExactValue, digits: int | None = None) -> mpmath.mpf:
    """Evaluate ``v`` with pi computed to ``digits + GUARD_DIGITS`` digits.

    The returned mpf carries the guard digits; round with ``format_fixed``.
    """
    if digits is None:
        digits = default_digits()
    if digits < 1:
        raise ValueError("digits must be >= 1")
    v = _coerce(v)
    with mpmath.workdps(digits + GUARD_DIGITS):
        total = mpmath.mpf(0)
        pi = +mpmath.pi
        for e, q in v._terms:
            total += mpmath.mpf(q.numerator) / q.denominator * pi**e
        return +total


def to_decimal(x) -> Decimal:
    """Exact conversion of an mpf / int / Fraction to Decimal (for rounding)."""
    if isinstance(x, int):
        return Decimal(x)
    if isinstance(x, Fraction):
        with localcontext() as ctx:
            ctx.prec = max(50, 3 * (len(str(x.numerator)) + len(str(x.denominator))))
            return Decimal(x.numerator) / Decimal(x.denominator)
    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError("cannot render a non-finite value")
    if x == 0:
        return Decimal(0)
    sign, man, exp, _ = x._mpf_  # man_exp drops the sign
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Decimal(man << exp)
    # man / 2**-exp == man * 5**-exp / 10**-exp, exactly
    return Decimal(man * 5 ** (-exp)).scaleb(exp)


def _round_sig(x, digits: int) -> Decimal:
    d = to_decimal(x)
    if d == 0:
        return Decimal(0).quantize(Decimal(1).scaleb(-(digits - 1)))
    with localcontext() as ctx:
        ctx.prec = digits + 5
        lead = d.adjusted()
        quantum = Decimal(1).scaleb(lead - digits + 1)
        r = d.quantize(quantum, rounding=ROUND_HALF_EVEN)
        if r.adjusted() > lead:  # rounding carried into a new digit
            r = d.quantize(quantum.scaleb(1), rounding=ROUND_HALF_EVEN)
        return r


def format_fixed(x, digits: int) -> str:
    """Fixed-point rendering with ``digits`` significant digits, half-even."""
    r = _round_sig(x, digits)
    return format(r, "f")


def format_sci(x, digits: int) -> str:
    """Scientific rendering with ``digits`` significant digits, half-even."""
    r = _round_sig(x, digits)
    if r == 0:
        return "0." + "0" * (digits - 1) + "e+0"
    sign, ds, exp = r.as_tuple()
    ds = "".join(map(str, ds)).ljust(digits, "0")[:digits]
    e10 = r.adjusted()
    mant = ds[0] + ("." + ds[1:] if digits > 1 else "")
    return ("-" if sign else "") + mant + f"e{e10:+d}"


def format_fraction(q: Scalar) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
