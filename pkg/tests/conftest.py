"""
Shared fixtures for the PFS throughput oracle tests
"""
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import SCENARIO_DIR
from src.models.mcs import McsTable
from src.models.population import CellPopulation, FrameConfig
from src.models.sinr import LinkProfile


@pytest.fixture
def mcs_table():
    """Shipped 15-level CQI table"""
    return McsTable.default()


@pytest.fixture
def two_level_table():
    """Two-level table {(1.0, 1.0), (10.0, 2.0)}"""
    return McsTable((1.0, 10.0), (1.0, 2.0))


@pytest.fixture
def cell_edge_path():
    return SCENARIO_DIR / 'cell_edge.json'


@pytest.fixture
def symmetric_path():
    return SCENARIO_DIR / 'explicit_symmetric.json'


def random_links(rng: np.random.Generator, terminals: int, interferers: int,
                 spread_db: float = 40.0, n0: float = 0.05):
    """Terminals with one signal power and `interferers` log-uniform interferer powers"""
    links = []
    for _ in range(terminals):
        powers = 10.0 ** (rng.uniform(-spread_db, 0.0, size=interferers) / 10.0)
        links.append([LinkProfile(1.0, tuple(powers), n0)])
    return links


def random_population(rng: np.random.Generator, terminals: int, interferers: int,
                      n_rb: int = 1) -> CellPopulation:
    return CellPopulation.from_links(random_links(rng, terminals, interferers), FrameConfig(n_rb=n_rb))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_population():
    """Three heterogeneous terminals, two of them interference-limited"""
    links = [
        [LinkProfile(1.0, (0.5, 0.25), 0.05)],
        [LinkProfile(2.0, (0.3,), 0.1)],
        [LinkProfile(0.5, (), 0.02)]
    ]
    return CellPopulation.from_links(links, FrameConfig(n_rb=2))


@pytest.fixture
def make_population():
    """Factory for random exact populations with distinct roots"""
    return random_population
