"""Laplace spectrum of SO(N) from dominant weights.

Eigenvalues are ``|mu + rho|^2 - |rho|^2`` and multiplicities are squared Weyl
dimensions.  The Weyl vector never appears explicitly: it is absorbed into the
shifted coordinates ``x``:

* even ``N = 2n``:  ``x_j = b_j + n - j``,
* odd ``N = 2n+1``: ``x_j = 2 b_j + 2n - 2j + 1``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from weyl_lab.config import DomainError


@dataclass(frozen=True)
class GroupParams:
    N: int
    n: int
    parity: str  # "even" | "odd"
    d: int
    lambda_shift: Fraction  # R^2 = radius_scale * lambda + lambda_shift
    radius_scale: int

    @property
    def even(self) -> bool:
        return self.parity == "even"

    @property
    def name(self) -> str:
        return f"SO({self.N})"

    def radius_sq(self, lam: int) -> int:
        """Exact R^2 attached to an integer spectral parameter."""
        r2 = self.radius_scale * lam + self.lambda_shift
        assert r2.denominator == 1
        return int(r2)

    def lambda_of_radius_sq(self, r2: int) -> Fraction:
        return (r2 - self.lambda_shift) / self.radius_scale

    @property
    def symmetry_order(self) -> int:
        """Signed permutations identifying a lattice point with a chamber point."""
        f = 1
        for i in range(2, self.n + 1):
            f *= i
        return (2 ** (self.n - 1) if self.even else 2**self.n) * f


def group_params(N: int) -> GroupParams:
    if not isinstance(N, int) or N < 2:
        raise DomainError(f"invalid group SO({N}): need N >= 2")
    d = N * (N - 1) // 2
    if N % 2 == 0:
        n = N // 2
        shift = Fraction(n * (n - 1) * (2 * n - 1), 6)
        return GroupParams(N, n, "even", d, shift, 1)
    n = (N - 1) // 2
    shift = Fraction(n * (4 * n * n - 1), 3)
    return GroupParams(N, n, "odd", d, shift, 4)


def parse_group(text: str) -> GroupParams:
    """Parse ``SO8`` / ``SO(8)`` / ``8``."""
    t = text.strip().upper().replace("(", "").replace(")", "")
    if t.startswith("SO"):
        t = t[2:]
    try:
        N = int(t)
    except ValueError:
        raise DomainError(f"cannot parse group {text!r}") from None
    return group_params(N)


def is_dominant(b: Sequence[int], g: GroupParams) -> bool:
    if len(b) != g.n:
        return False
    if g.even:
        if g.n == 1:
            return True
        if any(b[j] < b[j + 1] for j in range(g.n - 2)):
            return False
        return b[g.n - 2] >= abs(b[g.n - 1])
    return all(b[j] >= b[j + 1] for j in range(g.n - 1)) and b[-1] >= 0


def weight_to_coords(b: Sequence[int], g: GroupParams) -> tuple[int, ...]:
    if not is_dominant(b, g):
        raise DomainError(f"{tuple(b)} is not a dominant weight of {g.name}")
    n = g.n
    if g.even:
        return tuple(b[j - 1] + n - j for j in range(1, n + 1))
    return tuple(2 * b[j - 1] + 2 * n - 2 * j + 1 for j in range(1, n + 1))


def coords_to_weight(x: Sequence[int], g: GroupParams) -> tuple[int, ...]:
    n = g.n
    if g.even:
        return tuple(x[j - 1] - n + j for j in range(1, n + 1))
    return tuple((x[j - 1] - 2 * n + 2 * j - 1) // 2 for j in range(1, n + 1))


def multiplicity(x: Sequence[int], g: GroupParams) -> int:
    """Squared Weyl dimension as a polynomial in the shifted coordinates.

    Valid for any integer vector; vanishes off the regular set.
    """
    n = g.n
    if len(x) != n:
        raise DomainError(f"expected {n} coordinates, got {len(x)}")
    num, den = 1, 1
    # x_{n-i} in 1-based indexing is x[n-1-i]
    if g.even:
        for i in range(n):
            xi2 = x[n - 1 - i] ** 2
            for j in range(i + 1, n):
                num *= x[n - 1 - j] ** 2 - xi2
                den *= j * j - i * i
    else:
        for i in range(n):
            xi = x[n - 1 - i]
            num *= xi
            den *= 2 * i + 1
            for j in range(i + 1, n):
                num *= x[n - 1 - j] ** 2 - xi * xi
                den *= (2 * j + 1) ** 2 - (2 * i + 1) ** 2
    q = Fraction(num, den)
    if q.denominator != 1:
        raise ArithmeticError(f"Weyl dimension not integral at x={tuple(x)}: {q}")
    return q.numerator**2


def eigenvalue(b: Sequence[int], g: GroupParams) -> int:
    x = weight_to_coords(b, g)
    s = sum(t * t for t in x)
    if g.even:
        lam = s - g.lambda_shift
    else:
        lam = Fraction(s, 4) - Fraction(g.n * (4 * g.n**2 - 1), 12)
    assert lam.denominator == 1 and lam >= 0, (b, lam)
    return int(lam)


def _chamber_points(g: GroupParams, r2_max: int, x1_slab: tuple[int, int] | None = None
                    ) -> Iterator[tuple[int, ...]]:
    """Shifted coordinates of every dominant weight with ``|x|^2 <= r2_max``.

    Descends coordinate by coordinate from the largest admissible value; the
    tail bound uses the smallest possible sum of squares of the remaining
    strictly decreasing coordinates, so every branch visited is nonempty.
    """
    n = g.n
    if g.even:
        # smallest tail for positions j..n-1: (n-j)^2 + ... + 1^2 + 0^2
        tail = [sum(t * t for t in range(n - j)) for j in range(n + 1)]
    else:
        # odd strictly decreasing, last >= 1: 1, 3, 5, ...
        tail = [sum((2 * t + 1) ** 2 for t in range(n - j)) for j in range(n + 1)]
    x = [0] * n

    def rec(j: int, upper: int | None, budget: int):
        rest = tail[j + 1]
        if budget < rest:
            return
        top = isqrt(budget - rest)
        if upper is not None:
            top = min(top, upper - (1 if g.even else 2))
        if g.even:
            signed_last = j == n - 1
            low = -top if signed_last else n - 1 - j
            step = 1
        else:
            if top % 2 == 0:
                top -= 1
            low = 2 * (n - 1 - j) + 1
            step = 2
        if j == 0 and x1_slab is not None:
            low = max(low, x1_slab[0])
            top = min(top, x1_slab[1])
            if not g.even and top % 2 == 0:
                top -= 1
        v = top
        while v >= low:
            x[j] = v
            if j == n - 1:
                yield tuple(x)
            else:
                yield from rec(j + 1, v, budget - v * v)
            v -= step

    if r2_max < tail[0]:
        return
    yield from rec(0, None, r2_max)


@dataclass
class Spectrum:
    entries: list[tuple[int, int]] = field(default_factory=list)

    def count_up_to(self, lam: int) -> int:
        return sum(m for e, m in self.entries if e <= lam)

    def cumulative(self) -> list[tuple[int, int]]:
        out, acc = [], 0
        for e, m in self.entries:
            acc += m
            out.append((e, acc))
        return out

    def to_json(self) -> str:
        return json.dumps([{"lambda": str(e), "mult": str(m)} for e, m in self.entries])

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        return cls([(int(r["lambda"]), int(r["mult"])) for r in json.loads(text)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "mult"])
        for e, m in self.entries:
            w.writerow([e, m])
        return buf.getvalue()


def dominant_weights(g: GroupParams, lam_max: int) -> Iterator[tuple[int, ...]]:
    """Dominant weights with eigenvalue <= lam_max, in lexicographic descent."""
    if lam_max < 0:
        return
    for x in _chamber_points(g, g.radius_sq(lam_max)):
        yield coords_to_weight(x, g)


def enumerate_spectrum(g: GroupParams, lam_max) -> Spectrum:
    lam_max = int(Fraction(lam_max).__floor__())
    acc: dict[int, int] = {}
    for b in dominant_weights(g, lam_max):
        lam = eigenvalue(b, g)
        if lam > lam_max:
            continue
        acc[lam] = acc.get(lam, 0) + multiplicity(weight_to_coords(b, g), g)
    return Spectrum(sorted(acc.items()))
