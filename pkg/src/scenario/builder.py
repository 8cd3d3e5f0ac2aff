"""
Scenario ingestion: JSON files to CellScenario, and CellScenario to the
LinkProfile matrices and populations the models consume
"""
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pydantic

from config.settings import frame_defaults
from src.exceptions import DomainError, ValidationError
from src.models.population import CellPopulation
from src.models.sinr import LinkProfile
from src.scenario.schema import (
    BaseStationSpec,
    CellScenario,
    ExplicitPowers,
    FrameSpec,
    LogDistancePathloss,
    TerminalSpec
)
from src.utils.helpers import db_to_linear
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Distances below the 1 m reference are clamped to it
MIN_DISTANCE_M = 1.0

# Thermal noise over one 180 kHz RB with a 9 dB noise figure
DEFAULT_NOISE_POWER = db_to_linear(-174.0 + 10.0 * math.log10(180e3) + 9.0 - 30.0)


def _field_path(error: Dict[str, Any]) -> str:
    return '.'.join(str(part) for part in error.get('loc', ())) or 'scenario'


def load_scenario(source: Union[str, Path, Dict[str, Any]]) -> CellScenario:
    """
    Parse and validate a scenario

    Args:
        source: Path to a JSON file, JSON text, or an already-parsed dict

    Returns:
        CellScenario

    Raises:
        ValidationError: Unreadable JSON or schema violation (field names the offending entry)
    """
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if isinstance(source, Path) or not text.lstrip().startswith('{'):
            path = Path(source)
            if not path.exists():
                raise ValidationError(f"Scenario file not found: {path}", field="scenario")
            text = path.read_text(encoding='utf-8')
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Invalid scenario JSON: {e}", field="scenario", row=e.lineno)

    try:
        scenario = CellScenario.model_validate(data)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        raise ValidationError(f"Invalid scenario: {first['msg']}", field=_field_path(first))

    logger.debug(f"Loaded scenario '{scenario.name or 'unnamed'}': {len(scenario.terminals)} terminals, "
                 f"{len(scenario.base_stations)} base stations")
    return scenario


def save_scenario(scenario: CellScenario, path: Union[str, Path]) -> Path:
    """Write a scenario as indented JSON (temp file + rename)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
            f.write(scenario.model_dump_json(indent=2))
            f.write('\n')
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.info(f"Saved scenario to {path}")
    return path


def received_power(bs: BaseStationSpec, position, pathloss: LogDistancePathloss) -> float:
    """tx · 10^{(-ref_loss - 10·exponent·log10 d + shadowing)/10} with d clamped to 1 m"""
    distance = max(math.dist(bs.position, position), MIN_DISTANCE_M)
    if not (math.isfinite(distance) and distance > 0):
        raise DomainError(f"Invalid distance to base station '{bs.id}'")
    loss_db = pathloss.ref_loss_db + 10.0 * pathloss.exponent * math.log10(distance) - bs.shadowing_db
    return bs.tx_power_per_rb * db_to_linear(-loss_db)


def power_matrix(scenario: CellScenario) -> np.ndarray:
    """|J| x |BS| matrix of average received power per RB"""
    if isinstance(scenario.pathloss, ExplicitPowers):
        return np.asarray(scenario.pathloss.powers, dtype=float)
    return np.array([
        [received_power(bs, t.position, scenario.pathloss) for bs in scenario.base_stations]
        for t in scenario.terminals
    ])


def compute_link_profiles(scenario: CellScenario) -> List[List[LinkProfile]]:
    """
    LinkProfile matrix (|J| x N), homogeneous over resource blocks

    Zero entries of an explicit matrix are dropped from the interferer list.

    Raises:
        DomainError: Non-positive serving power, or a terminal with neither
            interference nor noise
    """
    powers = power_matrix(scenario)
    n_rb = scenario.frame.n_rb
    links = []
    for j, terminal in enumerate(scenario.terminals):
        serving = scenario.serving_index(j)
        interferers = tuple(p for b, p in enumerate(powers[j]) if b != serving and p > 0)
        try:
            link = LinkProfile(float(powers[j, serving]), interferers, scenario.noise_power)
        except DomainError as e:
            raise DomainError(f"Terminal '{terminal.id}': {e}")
        links.append([link] * n_rb)
    return links


def build_population(scenario: CellScenario, on_degenerate: str = 'raise') -> CellPopulation:
    """Exact SINR laws of every terminal on the scenario's frame"""
    return CellPopulation.from_links(compute_link_profiles(scenario), scenario.frame_config,
                                     on_degenerate=on_degenerate)


def ian_sinrs(scenario: CellScenario) -> np.ndarray:
    """|J| x N matrix of Z̃ = p0/(P + N0)"""
    return np.array([[link.ian_sinr for link in row] for row in compute_link_profiles(scenario)])


def split_interference(link: LinkProfile, count: int) -> LinkProfile:
    """Same total interference spread over `count` equal interferers"""
    return link.equal_split(count)


@dataclass(frozen=True)
class DropParams:
    """Random single-cell drop: terminals uniform in a disk, interferers evenly on a ring"""
    cell_radius: float = 250.0
    terminals: int = 10
    interferers: int = 6
    interferer_ring_radius: float = 500.0
    seed: int = 0
    tx_power_per_rb: float = 20.0 / 25
    ref_loss_db: float = 38.0
    exponent: float = 3.5
    noise_power: float = DEFAULT_NOISE_POWER
    n_rb: int = frame_defaults.N_RB

    def __post_init__(self):
        if not self.cell_radius > MIN_DISTANCE_M:
            raise ValidationError("Cell radius must exceed 1 m", field="cell_radius")
        if self.terminals < 1:
            raise ValidationError("Need at least one terminal", field="terminals")
        if self.interferers < 0:
            raise ValidationError("Interferer count must be >= 0", field="interferers")
        if not self.noise_power > 0:
            raise ValidationError("Noise power must be positive", field="noise_power")


def generate_drop(params: DropParams = DropParams(), name: Optional[str] = None) -> CellScenario:
    """
    Draw a reproducible single-cell deployment

    The serving base station sits at the origin; terminals are uniform over
    the disk of radius cell_radius (minimum 1 m); interferers are spaced
    evenly on a ring of radius interferer_ring_radius.
    """
    rng = np.random.default_rng(params.seed)
    radius = params.cell_radius * np.sqrt(rng.uniform(size=params.terminals))
    radius = np.maximum(radius, MIN_DISTANCE_M)
    angle = rng.uniform(0.0, 2.0 * math.pi, size=params.terminals)

    stations = [BaseStationSpec(id='bs0', position=(0.0, 0.0), tx_power_per_rb=params.tx_power_per_rb)]
    for i in range(params.interferers):
        theta = 2.0 * math.pi * i / params.interferers
        stations.append(BaseStationSpec(
            id=f'bs{i + 1}',
            position=(params.interferer_ring_radius * math.cos(theta),
                      params.interferer_ring_radius * math.sin(theta)),
            tx_power_per_rb=params.tx_power_per_rb,
            role='interferer'
        ))

    terminals = [
        TerminalSpec(id=f'ms{j}', position=(float(r * math.cos(a)), float(r * math.sin(a))), serving_bs='bs0')
        for j, (r, a) in enumerate(zip(radius, angle))
    ]

    scenario = CellScenario(
        name=name or f'drop-seed{params.seed}',
        base_stations=stations,
        terminals=terminals,
        pathloss=LogDistancePathloss(ref_loss_db=params.ref_loss_db, exponent=params.exponent),
        noise_power=params.noise_power,
        frame=FrameSpec(n_rb=params.n_rb)
    )
    logger.info(f"Generated drop with {params.terminals} terminals and {params.interferers} interferers "
                f"(seed {params.seed})")
    return scenario
