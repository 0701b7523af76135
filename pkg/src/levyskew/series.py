"""Finite power series in the time-to-maturity variable.

Every expansion in the package evaluates to a finite sum of c * t**p terms.
Terms are kept in ascending exponent order; coincident exponents are kept as
separate terms and summed only at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable

__all__ = ["PowerSeries", "series_to_json"]


@dataclass(frozen=True)
class PowerSeries:
    terms: tuple[tuple[float, float], ...]  # (coefficient, exponent)

    @staticmethod
    def from_terms(terms: Iterable[tuple[float, float]]) -> "PowerSeries":
        ordered = tuple(sorted(((float(c), float(p)) for c, p in terms),
                               key=lambda term: term[1]))
        return PowerSeries(ordered)

    def __call__(self, t: float) -> float:
        if t < 0:
            raise ValueError("power series defined for t >= 0")
        return math.fsum(c * t ** p for c, p in self.terms)

    def truncate(self, max_exponent: float, tol: float = 1e-12) -> "PowerSeries":
        """Drop terms with exponent above max_exponent (tolerance for ties)."""
        return PowerSeries(tuple(term for term in self.terms
                                 if term[1] <= max_exponent + tol))

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.terms)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(c for c, _ in self.terms)


def series_to_json(series: PowerSeries, meta: dict[str, Any]) -> dict[str, Any]:
    """JSON form used by the CLI: exponents, coefficients, and metadata."""
    return {
        "quantity_exponents": list(series.exponents),
        "coefficients": list(series.coefficients),
        "meta": meta,
    }
