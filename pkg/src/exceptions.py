"""
Exception hierarchy for the PFS throughput oracle
"""
from typing import Optional


class PfsOracleError(Exception):
    """Base class for all library errors"""


class DomainError(PfsOracleError, ValueError):
    """Argument outside the domain of a function (negative SINR, x <= 0 for E1, ...)"""


class ValidationError(PfsOracleError, ValueError):
    """Invalid input data (MCS table rows, scenario fields, configs)"""

    def __init__(self, message: str, field: Optional[str] = None, row: Optional[int] = None):
        super().__init__(message)
        self.field = field
        self.row = row


class ConvergenceError(PfsOracleError):
    """Adaptive quadrature ran out of subdivisions"""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate:.17g}, error bound={error_bound:.3g})")
        self.estimate = estimate
        self.error_bound = error_bound


class DegenerateRootsError(PfsOracleError):
    """Coincident partial-fraction poles that cannot be separated"""


class ComplexityError(PfsOracleError):
    """Closed-form expansion would exceed the configured term cap"""

    def __init__(self, term_count: int, cap: int):
        super().__init__(
            f"Closed-form expansion needs {term_count:,} terms (cap {cap:,}); "
            f"use the quadrature path instead"
        )
        self.term_count = term_count
        self.cap = cap


class IllConditionedError(PfsOracleError):
    """Alternating sum too ill-conditioned for a trustworthy closed-form value"""

    def __init__(self, condition: float, threshold: float):
        super().__init__(f"Condition estimate {condition:.3g} exceeds {threshold:.3g}")
        self.condition = condition
        self.threshold = threshold


class InfiniteMeanError(PfsOracleError):
    """SINR mean is infinite (interference present but no noise)"""


class SimulationError(PfsOracleError):
    """Internal failure of the Monte-Carlo simulator"""


class UsageError(PfsOracleError):
    """Invalid command-line request"""
