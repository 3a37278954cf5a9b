"""Dyadic-window envelopes of oscillating error terms and their log-log slopes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from weyl_lab.config import DomainError, PrecisionError


@dataclass
class EnvelopeFit:
    slope: float
    intercept: float
    residual: float
    windows: list[tuple[int, float]]  # (j, log sup |error|) per usable window [2^j, 2^(j+1))

    def to_json(self) -> str:
        return json.dumps({"slope": self.slope, "intercept": self.intercept,
                           "residual": self.residual,
                           "windows": [{"j": j, "log_sup": v} for j, v in self.windows]})


def dyadic_suprema(points: Sequence[tuple[float, object]]) -> dict[int, object]:
    """``sup |error|`` over each window ``[2^j, 2^(j+1))`` of the abscissa."""
    sup: dict[int, object] = {}
    for t, e in points:
        if t < 1:
            continue
        j = int(t).bit_length() - 1
        a = abs(e)
        if j not in sup or a > sup[j]:
            sup[j] = a
    return sup


def envelope_fit(points: Sequence[tuple[float, object]], min_windows: int = 4,
                 ulp_floor: dict[int, object] | None = None) -> EnvelopeFit:
    """Least squares of log sup|error| on log window midpoint over dyadic windows.

    Windows whose supremum is zero are dropped.  ``ulp_floor`` maps a window
    to the evaluation uncertainty there; a supremum within ``1e10`` of it
    raises ``PrecisionError``.
    """
    sup = dyadic_suprema(points)
    xs, ys, wins = [], [], []
    for j in sorted(sup):
        s = sup[j]
        if s == 0:
            continue
        if ulp_floor is not None and j in ulp_floor and s <= 10**10 * ulp_floor[j]:
            raise PrecisionError(f"window 2^{j}: |error| not resolved at this precision")
        ly = float(mpmath.log(s))
        xs.append(float(mpmath.log(1.5 * 2**j)))
        ys.append(ly)
        wins.append((j, ly))
    if len(xs) < min_windows:
        raise DomainError(f"envelope fit needs >= {min_windows} windows, got {len(xs)}")
    A = np.vstack([xs, np.ones(len(xs))]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, np.array(ys), rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, intercept]) - ys) ** 2)))
    return EnvelopeFit(float(slope), float(intercept), resid, wins)
