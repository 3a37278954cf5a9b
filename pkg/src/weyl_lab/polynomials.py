"""Sparse multivariate polynomials over the rationals.

Includes a small parser, the Laplacian, the decomposition of a homogeneous
polynomial into radial powers times harmonics, and exact sphere/ball
integration of monomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from weyl_lab.exact import ExactValue

Exponent = tuple[int, ...]


class PolySyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class MultiPoly:
    """Polynomial in ``x1..xn`` with exact rational coefficients."""

    __slots__ = ("n_vars", "_terms")

    def __init__(self, n_vars: int, terms: Mapping[Exponent, object] | None = None):
        if n_vars < 1:
            raise ValueError("n_vars must be positive")
        self.n_vars = n_vars
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n_vars:
                raise ValueError(f"exponent {e} has wrong length for {n_vars} variables")
            c = Fraction(c)
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
        self._terms = {e: c for e, c in clean.items() if c != 0}

    # constructors

    @classmethod
    def constant(cls, n_vars: int, c=1) -> "MultiPoly":
        return cls(n_vars, {(0,) * n_vars: c})

    @classmethod
    def var(cls, i: int, n_vars: int) -> "MultiPoly":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= n_vars:
            raise ValueError(f"variable x{i} out of range for {n_vars} variables")
        e = [0] * n_vars
        e[i - 1] = 1
        return cls(n_vars, {tuple(e): 1})

    @classmethod
    def norm_sq(cls, n_vars: int) -> "MultiPoly":
        terms = {}
        for i in range(n_vars):
            e = [0] * n_vars
            e[i] = 2
            terms[tuple(e)] = 1
        return cls(n_vars, terms)

    # inspection

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_part(self, g: int) -> "MultiPoly":
        return MultiPoly(self.n_vars, {e: c for e, c in self._terms.items() if sum(e) == g})

    def homogeneous_parts(self) -> dict[int, "MultiPoly"]:
        degs = sorted({sum(e) for e in self._terms})
        return {g: self.homogeneous_part(g) for g in degs}

    def denominator_lcm(self) -> int:
        return lcm(*(c.denominator for c in self._terms.values())) if self._terms else 1

    # arithmetic

    def _check(self, other: "MultiPoly"):
        if other.n_vars != self.n_vars:
            raise ValueError("variable count mismatch")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.n_vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.n_vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.n_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        t: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.n_vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.n_vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._lift(other) if isinstance(other, (MultiPoly, int, Fraction)) else NotImplemented
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash((self.n_vars, frozenset(self._terms.items())))

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        return evaluate(self, point)

    def __repr__(self):
        return f"MultiPoly({self.n_vars}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def evaluate(P: MultiPoly, point: Sequence) -> Fraction:
    total = Fraction(0)
    for e, c in P.items():
        v = c
        for xi, ei in zip(point, e):
            if ei:
                v *= xi**ei
        total += v
    return total


def format_poly(P: MultiPoly) -> str:
    if P.is_zero():
        return "0"
    out = []
    for e, c in sorted(P.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0]))):
        mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = f"({a})" if a.denominator != 1 else str(a)
        elif a == 1:
            body = mono
        else:
            body = (f"({a})" if a.denominator != 1 else str(a)) + "*" + mono
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(\S))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("var", int(m.group(3)), start))
        elif m.group(4) in "+-*/^()":
            toks.append((m.group(4), None, start))
        else:
            raise PolySyntaxError(f"unexpected character {m.group(4)!r}", start)
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n_vars: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = n_vars

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str | None = None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {t[0]!r}", t[2])
        self.i += 1
        return t

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("int", "var", "("):
                acc = acc * self.factor()
            else:
                return acc

    def _power(self) -> int:
        if self.peek()[0] == "^":
            self.take()
            return self.take("int")[1]
        return 1

    def factor(self) -> MultiPoly:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            q = Fraction(val)
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")
                if den[1] == 0:
                    raise PolySyntaxError("zero denominator", den[2])
                q = Fraction(val, den[1])
            return MultiPoly.constant(self.n, q)
        if kind == "var":
            self.take()
            if not 1 <= val <= self.n:
                raise PolySyntaxError(f"variable x{val} out of range (n_vars={self.n})", pos)
            return MultiPoly.var(val, self.n) ** self._power()
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner ** self._power()
        raise PolySyntaxError(f"unexpected token {kind!r}", pos)


def parse_poly(text: str, n_vars: int) -> MultiPoly:
    p = _Parser(text, n_vars)
    out = p.expr()
    if p.peek()[0] != "eof":
        raise PolySyntaxError(f"trailing input {p.peek()[0]!r}", p.peek()[2])
    return out


# calculus


def partial(P: MultiPoly, i: int, order: int = 1) -> MultiPoly:
    """Derivative in the (0-based) variable ``i``."""
    t = {}
    for e, c in P.items():
        k = e[i]
        if k < order:
            continue
        f = 1
        for s in range(order):
            f *= k - s
        e2 = list(e)
        e2[i] = k - order
        t[tuple(e2)] = t.get(tuple(e2), 0) + c * f
    return MultiPoly(P.n_vars, t)


def laplacian(P: MultiPoly) -> MultiPoly:
    t: dict[Exponent, Fraction] = {}
    for e, c in P.items():
        for i, k in enumerate(e):
            if k >= 2:
                e2 = e[:i] + (k - 2,) + e[i + 1:]
                t[e2] = t.get(e2, 0) + c * k * (k - 1)
    return MultiPoly(P.n_vars, t)


def is_harmonic(P: MultiPoly) -> bool:
    return laplacian(P).is_zero()


@dataclass
class HarmonicDecomposition:
    """``P = sum_l |x|^(2l) * component_l`` with harmonic components."""

    n_vars: int
    degree: int
    components: list[tuple[int, MultiPoly]]

    def reconstruct(self) -> MultiPoly:
        r2 = MultiPoly.norm_sq(self.n_vars)
        out = MultiPoly(self.n_vars)
        for l, H in self.components:
            out = out + (r2**l) * H
        return out

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def harmonic_decompose(P: MultiPoly) -> HarmonicDecomposition:
    """Unique decomposition of a homogeneous polynomial into harmonics.

    Peels components from the top radial power down.  If ``P`` has a term
    ``|x|^(2J) H`` with ``H`` harmonic of degree ``h``, then ``Laplacian^J``
    kills every lower radial power and maps that term to
    ``prod_{j=1..J} 2j(2j + n - 2 + 2h) * H``.
    """
    if not P.is_homogeneous():
        raise ValueError("harmonic_decompose needs a homogeneous polynomial")
    n = P.n_vars
    if P.is_zero():
        return HarmonicDecomposition(n, -1, [])
    g = P.degree
    # integer arithmetic throughout: rest holds mult * (P - peeled part)
    mult = P.denominator_lcm()
    rest = {e: int(c * mult) for e, c in P.items()}
    comps = []
    for J in range(g // 2, -1, -1):
        h = g - 2 * J
        D = rest
        for _ in range(J):
            D = _int_laplacian(D)
        if not D:
            continue
        scale = 1
        for j in range(1, J + 1):
            scale *= 2 * j * (2 * j + n - 2 + 2 * h)
        comps.append((J, MultiPoly(n, {e: Fraction(c, scale * mult) for e, c in D.items()})))
        # rest <- scale * rest - |x|^(2J) D, i.e. the same remainder times scale
        shifted = D
        for _ in range(J):
            shifted = _int_times_norm_sq(shifted, n)
        rest = {e: scale * c for e, c in rest.items()}
        for e, c in shifted.items():
            v = rest.get(e, 0) - c
            if v:
                rest[e] = v
            else:
                rest.pop(e, None)
        mult *= scale
    if rest:
        raise ArithmeticError("harmonic decomposition left a nonzero remainder")
    comps.sort(key=lambda t: t[0])
    return HarmonicDecomposition(n, g, comps)


def _int_laplacian(t: dict) -> dict:
    out: dict = {}
    for e, c in t.items():
        for i, k in enumerate(e):
            if k >= 2:
                e2 = e[:i] + (k - 2,) + e[i + 1:]
                out[e2] = out.get(e2, 0) + c * k * (k - 1)
    return {e: c for e, c in out.items() if c}


def _int_times_norm_sq(t: dict, n: int) -> dict:
    out: dict = {}
    for e, c in t.items():
        for i in range(n):
            e2 = e[:i] + (e[i] + 2,) + e[i + 1:]
            out[e2] = out.get(e2, 0) + c
    return out


# integration


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def monomial_sphere_mean(e: Exponent) -> Fraction:
    """Average of ``x^e`` over the unit sphere in ``len(e)`` dimensions."""
    if any(k % 2 for k in e):
        return Fraction(0)
    n = len(e)
    num = 1
    for k in e:
        num *= _double_factorial(k - 1)
    den = 1
    for j in range(sum(e) // 2):
        den *= n + 2 * j
    return Fraction(num, den)


def sphere_integral(P: MultiPoly, n: int | None = None) -> Fraction:
    """Integral of ``P`` against the normalized measure on ``S^{n-1}``."""
    if n is not None and n != P.n_vars:
        raise ValueError("dimension mismatch")
    return sum((c * monomial_sphere_mean(e) for e, c in P.items()), Fraction(0))


def sphere_volume(n: int) -> ExactValue:
    """Surface measure of the unit sphere ``S^{n-1}`` in ``R^n``."""
    if n % 2 == 0:
        f = 1
        for i in range(2, n // 2):
            f *= i
        return ExactValue.pi_power(n // 2, Fraction(2, f))
    k = (n - 1) // 2
    return ExactValue.pi_power(k, Fraction(2 * 2**k, _double_factorial(n - 2)))


def ball_volume(n: int) -> ExactValue:
    return sphere_volume(n) * Fraction(1, n)


def ball_integral(P: MultiPoly, n: int | None = None) -> tuple[ExactValue, int]:
    """``(c, p)`` with ``integral over |x| <= R of P == c * R**p``."""
    if n is not None and n != P.n_vars:
        raise ValueError("dimension mismatch")
    n = P.n_vars
    if P.is_zero():
        return ExactValue(), n
    if not P.is_homogeneous():
        raise ValueError("ball_integral needs a homogeneous polynomial")
    g = P.degree
    coef = sphere_volume(n) * (sphere_integral(P) / (n + g))
    return coef, n + g


def substitute_diag(P: MultiPoly, a: Sequence[int]) -> MultiPoly:
    if len(a) != P.n_vars:
        raise ValueError("diagonal length must equal n_vars")
    t = {}
    for e, c in P.items():
        f = 1
        for ai, k in zip(a, e):
            f *= ai**k
        t[e] = c * f
    return MultiPoly(P.n_vars, t)


def univariate(coeffs: Iterable) -> MultiPoly:
    """One-variable polynomial from ascending coefficients."""
    return MultiPoly(1, {(k,): c for k, c in enumerate(coeffs)})
