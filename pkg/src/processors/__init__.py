"""Report assembly and parameter sweeps"""

from .throughput_evaluator import (
    MODEL_NAMES,
    SIM_COLUMN,
    ThroughputEvaluator,
    ThroughputReport,
    parse_models,
    rate_column,
    error_column
)
from .sweeps import gain_table, convergence_sweep

__all__ = [
    'MODEL_NAMES',
    'SIM_COLUMN',
    'ThroughputEvaluator',
    'ThroughputReport',
    'parse_models',
    'rate_column',
    'error_column',
    'gain_table',
    'convergence_sweep'
]
