"""
Scenario file schema (JSON, versioned by format_version)

A scenario lists base stations, terminals, the pathloss model (log-distance
or an explicit received-power matrix), the noise power per RB and the
OFDMA frame. Every terminal is served by one base station; all other base
stations interfere.
"""
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, model_validator

from config.settings import frame_defaults
from src.models.population import FrameConfig

FORMAT_VERSION = 1

Position = Tuple[float, float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class BaseStationSpec(_Strict):
    id: str
    position: Position = (0.0, 0.0)
    tx_power_per_rb: PositiveFloat
    role: Literal['serving', 'interferer'] = 'serving'
    # constant per-link shadowing offset, dB
    shadowing_db: float = 0.0


class TerminalSpec(_Strict):
    id: str
    position: Position
    serving_bs: str


class LogDistancePathloss(_Strict):
    model: Literal['log_distance'] = 'log_distance'
    ref_loss_db: float = Field(description="Loss at the 1 m reference distance")
    exponent: PositiveFloat


class ExplicitPowers(_Strict):
    """powers[j][b]: average received power (W per RB) at terminal j from base station b"""
    model: Literal['explicit'] = 'explicit'
    powers: List[List[float]]


Pathloss = Annotated[Union[LogDistancePathloss, ExplicitPowers], Field(discriminator='model')]


class FrameSpec(_Strict):
    n_rb: PositiveInt = frame_defaults.N_RB
    n_s: PositiveInt = frame_defaults.N_S
    n_c: PositiveInt = frame_defaults.N_C
    t_tti: PositiveFloat = frame_defaults.T_TTI
    window: PositiveInt = frame_defaults.WINDOW

    def to_config(self) -> FrameConfig:
        return FrameConfig(self.n_rb, self.n_s, self.n_c, self.t_tti, self.window)


class CellScenario(_Strict):
    format_version: Literal[1] = FORMAT_VERSION
    name: Optional[str] = None
    base_stations: List[BaseStationSpec] = Field(min_length=1)
    terminals: List[TerminalSpec] = Field(min_length=1)
    pathloss: Pathloss
    noise_power: PositiveFloat
    frame: FrameSpec = FrameSpec()

    @model_validator(mode='after')
    def _check_references(self) -> 'CellScenario':
        bs_ids = [bs.id for bs in self.base_stations]
        if len(set(bs_ids)) != len(bs_ids):
            raise ValueError("base station ids must be unique")
        term_ids = [t.id for t in self.terminals]
        if len(set(term_ids)) != len(term_ids):
            raise ValueError("terminal ids must be unique")

        roles = {bs.id: bs.role for bs in self.base_stations}
        for t in self.terminals:
            if t.serving_bs not in roles:
                raise ValueError(f"terminal '{t.id}' references unknown base station '{t.serving_bs}'")
            if roles[t.serving_bs] != 'serving':
                raise ValueError(f"terminal '{t.id}' is served by interferer-only base station '{t.serving_bs}'")

        if isinstance(self.pathloss, ExplicitPowers):
            matrix = self.pathloss.powers
            if len(matrix) != len(self.terminals):
                raise ValueError(f"explicit power matrix has {len(matrix)} rows for {len(self.terminals)} terminals")
            for j, row in enumerate(matrix):
                if len(row) != len(self.base_stations):
                    raise ValueError(f"explicit power row {j} has {len(row)} entries for "
                                     f"{len(self.base_stations)} base stations")
                if any(p < 0 for p in row):
                    raise ValueError(f"explicit power row {j} has negative entries")
        return self

    def serving_index(self, j: int) -> int:
        target = self.terminals[j].serving_bs
        return next(b for b, bs in enumerate(self.base_stations) if bs.id == target)

    @property
    def frame_config(self) -> FrameConfig:
        return self.frame.to_config()
