"""Configuration package for the PFS throughput oracle"""

from .settings import (
    quadrature_config,
    analytic_config,
    simulator_config,
    frame_defaults,
    oracle_config,
    export_config,
    log_config,
    print_configuration,
    validate_configuration,
    BASE_DIR,
    CONFIG_DIR,
    EXPORT_DIR,
    LOG_DIR,
    DEFAULT_MCS_TABLE,
    SCENARIO_DIR
)

__all__ = [
    'quadrature_config',
    'analytic_config',
    'simulator_config',
    'frame_defaults',
    'oracle_config',
    'export_config',
    'log_config',
    'print_configuration',
    'validate_configuration',
    'BASE_DIR',
    'CONFIG_DIR',
    'EXPORT_DIR',
    'LOG_DIR',
    'DEFAULT_MCS_TABLE',
    'SCENARIO_DIR'
]
