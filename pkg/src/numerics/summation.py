"""
Compensated and extended-precision summation for alternating expansions
"""
import math
from dataclasses import dataclass
from typing import Iterable

import mpmath

from config.settings import analytic_config


@dataclass(frozen=True)
class CompensatedSum:
    """Sum value plus the condition estimate Σ|t| / |Σt|"""
    value: float
    condition: float


class CompensatedAccumulator:
    """
    Running sum carrying its rounding error (Neumaier's variant of Kahan)

    Unlike plain Kahan summation it stays exact when a small addend meets a
    much larger running sum, e.g. [1e16, 1, -1e16].
    """

    def __init__(self):
        self.sum = 0.0
        self.carry = 0.0
        self.magnitude = 0.0

    def add(self, value: float):
        total = self.sum + value
        if abs(self.sum) >= abs(value):
            self.carry += (self.sum - total) + value
        else:
            self.carry += (value - total) + self.sum
        self.sum = total
        self.magnitude += abs(value)

    def value(self) -> float:
        return self.sum + self.carry

    def condition(self) -> float:
        total = self.value()
        if self.magnitude == 0.0:
            return 1.0
        if total == 0.0:
            return math.inf
        return self.magnitude / abs(total)


def compensated_sum(terms: Iterable[float]) -> CompensatedSum:
    """
    Sum terms with error-carrying accumulation

    Args:
        terms: Finite reals (any iterable, numpy arrays included)

    Returns:
        CompensatedSum with value and condition estimate (1 for empty input)
    """
    acc = CompensatedAccumulator()
    for term in (terms.tolist() if hasattr(terms, 'tolist') else terms):
        acc.add(float(term))
    return CompensatedSum(acc.value(), acc.condition())


def extended_sum(terms: Iterable[float], dps: int = None) -> float:
    """Sum in mpmath extended precision and round once to double"""
    dps = dps or analytic_config.EXTENDED_PRECISION_DPS
    values = terms.tolist() if hasattr(terms, 'tolist') else list(terms)
    with mpmath.workdps(dps):
        return float(mpmath.fsum(mpmath.mpf(v) for v in values))
