"""Exact experiments on the Laplace spectrum of SO(N) and Weyl's law."""

from weyl_lab.exact import ExactValue, exact_add, exact_eval, exact_mul
from weyl_lab.weights import GroupParams, Spectrum, group_params

__all__ = [
    "ExactValue",
    "GroupParams",
    "Spectrum",
    "exact_add",
    "exact_eval",
    "exact_mul",
    "group_params",
]

__version__ = "0.1.0"
