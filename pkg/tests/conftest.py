"""Independent oracles shared by the test modules.

These deliberately avoid the package's own formulas: representation counts
come from plain enumeration of Z^n, dimensions from the root-system form of
Weyl's formula, eigenvalues from <b, b + 2 rho>.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt

import pytest


def brute_rep(n: int, k_max: int, parity: str = "all") -> list[int]:
    top = isqrt(k_max)
    rng = range(-top, top + 1) if parity == "all" else [v for v in range(-top, top + 1) if v % 2]
    out = [0] * (k_max + 1)
    for m in product(rng, repeat=n):
        s = sum(t * t for t in m)
        if s <= k_max:
            out[s] += 1
    return out


def brute_shell_sum(n: int, k: int, f) -> Fraction:
    top = isqrt(k)
    total = Fraction(0)
    for m in product(range(-top, top + 1), repeat=n):
        if sum(t * t for t in m) == k:
            total += f(m)
    return total


def rho(N: int) -> list[Fraction]:
    n = N // 2
    if N % 2 == 0:
        return [Fraction(n - j) for j in range(1, n + 1)]
    return [Fraction(2 * n - 2 * j + 1, 2) for j in range(1, n + 1)]


def positive_roots(N: int) -> list[tuple[int, ...]]:
    n = N // 2
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            for s in (1, -1):
                r = [0] * n
                r[i], r[j] = 1, -s
                roots.append(tuple(r))
    if N % 2:
        for i in range(n):
            r = [0] * n
            r[i] = 1
            roots.append(tuple(r))
    return roots


def weyl_dimension(b, N: int) -> int:
    p = rho(N)
    num = den = Fraction(1)
    for a in positive_roots(N):
        num *= sum((bi + pi) * ai for bi, pi, ai in zip(b, p, a))
        den *= sum(pi * ai for pi, ai in zip(p, a))
    q = num / den
    assert q.denominator == 1
    return int(q)


def casimir(b, N: int) -> int:
    p = rho(N)
    q = sum(bi * (bi + 2 * pi) for bi, pi in zip(b, p))
    assert q.denominator == 1
    return int(q)


def dominant_box(N: int, top: int):
    n = N // 2
    for b in product(range(-top, top + 1), repeat=n):
        if N % 2 == 0:
            ok = all(b[j] >= b[j + 1] for j in range(n - 2)) and (n == 1 or b[n - 2] >= abs(b[n - 1]))
        else:
            ok = all(b[j] >= b[j + 1] for j in range(n - 1)) and b[-1] >= 0
        if ok:
            yield b


def brute_spectrum(N: int, lam_max: int) -> dict[int, int]:
    acc: dict[int, int] = {}
    for b in dominant_box(N, isqrt(lam_max) + 1):
        lam = casimir(b, N)
        if lam <= lam_max:
            acc[lam] = acc.get(lam, 0) + weyl_dimension(b, N) ** 2
    return acc


def brute_count(N: int, lam: int) -> int:
    return sum(brute_spectrum(N, lam).values())


@pytest.fixture
def oracles():
    return {
        "rep": brute_rep,
        "shell_sum": brute_shell_sum,
        "spectrum": brute_spectrum,
        "count": brute_count,
        "dim": weyl_dimension,
        "casimir": casimir,
    }


# acceptance reporting: one line per criterion, shown even when output is captured

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
