"""Run-time configuration shared by the library and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

ENV_DIGITS = "WEYL_LAB_DIGITS"
MIN_DIGITS = 20


class DomainError(ValueError):
    """Input outside the domain of an operation (bad group, empty shell, ...)."""


class PrecisionError(ArithmeticError):
    """Configured precision cannot resolve the requested quantity."""


def default_digits() -> int:
    raw = os.environ.get(ENV_DIGITS)
    if raw is None:
        return 80
    return int(raw)


def default_threads() -> int:
    return os.cpu_count() or 1


@dataclass
class CliConfig:
    digits: int = field(default_factory=default_digits)
    threads: int = field(default_factory=default_threads)
    format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise DomainError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.format!r}")
