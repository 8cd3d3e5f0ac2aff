"""Deployment scenarios: schema, loading and link-profile computation"""

from .schema import (
    FORMAT_VERSION,
    BaseStationSpec,
    TerminalSpec,
    LogDistancePathloss,
    ExplicitPowers,
    FrameSpec,
    CellScenario
)
from .builder import (
    DropParams,
    load_scenario,
    save_scenario,
    received_power,
    power_matrix,
    compute_link_profiles,
    build_population,
    ian_sinrs,
    split_interference,
    generate_drop
)

__all__ = [
    'FORMAT_VERSION',
    'BaseStationSpec',
    'TerminalSpec',
    'LogDistancePathloss',
    'ExplicitPowers',
    'FrameSpec',
    'CellScenario',
    'DropParams',
    'load_scenario',
    'save_scenario',
    'received_power',
    'power_matrix',
    'compute_link_profiles',
    'build_population',
    'ian_sinrs',
    'split_interference',
    'generate_drop'
]
