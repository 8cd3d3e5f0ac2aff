"""Special functions, quadrature and summation shared by the analytic modules"""

from .special import (
    exp_integral_e1,
    exp_integral_e1_scaled,
    exp_integral_en_scaled,
    exp_integral_ei_negative,
    e1_series,
    e1_continued_fraction,
    e1_continued_fraction_scaled
)
from .quadrature import QuadratureConfig, DEFAULT_QUADRATURE, integrate, integrate_piecewise
from .summation import CompensatedSum, CompensatedAccumulator, compensated_sum, extended_sum

__all__ = [
    'exp_integral_e1',
    'exp_integral_e1_scaled',
    'exp_integral_en_scaled',
    'exp_integral_ei_negative',
    'e1_series',
    'e1_continued_fraction',
    'e1_continued_fraction_scaled',
    'QuadratureConfig',
    'DEFAULT_QUADRATURE',
    'integrate',
    'integrate_piecewise',
    'CompensatedSum',
    'CompensatedAccumulator',
    'compensated_sum',
    'extended_sum'
]
