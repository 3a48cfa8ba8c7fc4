"""Result containers returned by evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class EvalResult:
    """A computed value together with a certified absolute error bound.

    ``value`` may be complex (characteristic functions, Hurwitz-Lerch
    differences); everything else in the package is real.  ``terms_used``
    counts series terms or quadrature nodes, whichever produced the value.
    """

    value: float | complex
    abs_error_bound: float
    terms_used: int
    method: str

    def __post_init__(self):
        if not math.isfinite(self.abs_error_bound):
            raise ValueError("abs_error_bound must be finite")
        if self.abs_error_bound < 0:
            raise ValueError("abs_error_bound must be nonnegative")

    @property
    def real(self) -> float:
        return self.value.real if isinstance(self.value, complex) else self.value
