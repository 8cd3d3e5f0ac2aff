"""Monte-Carlo PFS simulator"""

from .fading import FadingConfig, FadingGenerator, lag_autocorrelation, IID, GAUSS_MARKOV
from .pfs_simulator import (
    SimConfig,
    SimResult,
    run_pfs,
    empirical_sinr_gain,
    relative_error,
    ks_statistic,
    ks_critical_value,
    SINR_BASED,
    RATE_BASED,
    RELAXED,
    UNIQUE
)

__all__ = [
    'FadingConfig',
    'FadingGenerator',
    'lag_autocorrelation',
    'IID',
    'GAUSS_MARKOV',
    'SimConfig',
    'SimResult',
    'run_pfs',
    'empirical_sinr_gain',
    'relative_error',
    'ks_statistic',
    'ks_critical_value',
    'SINR_BASED',
    'RATE_BASED',
    'RELAXED',
    'UNIQUE'
]
