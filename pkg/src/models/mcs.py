"""
SINR-to-spectral-efficiency mapping C(z)
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from config.settings import DEFAULT_MCS_TABLE, frame_defaults
from src.exceptions import DomainError, ValidationError
from src.utils.helpers import db_to_linear, linear_to_db
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class McsTable:
    """
    Ordered MCS levels (z_m, c_m) with left-closed intervals A_m = [z_m, z_{m+1})

    Thresholds are linear SINR. Below z_1 the efficiency is 0; at or above
    z_M it is c_M. Payload per resource block is n_s·n_c·c_m bits.
    """
    thresholds: Tuple[float, ...]
    efficiencies: Tuple[float, ...]
    n_s: int = frame_defaults.N_S
    n_c: int = frame_defaults.N_C

    def __post_init__(self):
        object.__setattr__(self, 'thresholds', tuple(float(z) for z in self.thresholds))
        object.__setattr__(self, 'efficiencies', tuple(float(c) for c in self.efficiencies))

        if len(self.thresholds) != len(self.efficiencies):
            raise ValidationError("Threshold and efficiency counts differ", field="entries")
        if len(self.thresholds) < 2:
            raise ValidationError("An MCS table needs at least 2 entries", field="entries")
        if self.n_s < 1 or self.n_c < 1:
            raise ValidationError("N_S and N_C must be positive", field="n_s/n_c")

        for row, (z, c) in enumerate(zip(self.thresholds, self.efficiencies), start=1):
            if not (np.isfinite(z) and z > 0):
                raise ValidationError("Threshold must be a positive finite SINR", field="threshold", row=row)
            if not (np.isfinite(c) and c > 0):
                raise ValidationError("Efficiency must be positive", field="efficiency", row=row)

        for row in range(1, len(self.thresholds)):
            if self.thresholds[row] == self.thresholds[row - 1]:
                raise ValidationError("Duplicate threshold", field="threshold", row=row + 1)
            if self.thresholds[row] < self.thresholds[row - 1]:
                raise ValidationError("Thresholds must be strictly increasing", field="threshold", row=row + 1)
            if self.efficiencies[row] <= self.efficiencies[row - 1]:
                raise ValidationError("Efficiencies must be strictly increasing", field="efficiency", row=row + 1)

    @property
    def levels(self) -> int:
        return len(self.thresholds)

    @property
    def payload_scale(self) -> int:
        """Symbols per resource block, N_S·N_C"""
        return self.n_s * self.n_c

    @property
    def max_efficiency(self) -> float:
        return self.efficiencies[-1]

    @property
    def min_threshold(self) -> float:
        return self.thresholds[0]

    def interval_edges(self) -> List[float]:
        """[z_1, ..., z_M, inf]; interval m is [edges[m], edges[m+1])"""
        return list(self.thresholds) + [float('inf')]

    def intervals(self) -> List[Tuple[float, float, float]]:
        """(lower, upper, efficiency) per level, the last one open-ended"""
        edges = self.interval_edges()
        return [(edges[m], edges[m + 1], self.efficiencies[m]) for m in range(self.levels)]

    def spectral_efficiency(self, z: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """C(z) in bits/symbol; see module function"""
        return spectral_efficiency(z, self)

    def payload_bits_per_rb(self, z: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Bits carried by one resource block at SINR z"""
        return self.payload_scale * spectral_efficiency(z, self)

    def with_thresholds_db(self, start_db: float, step_db: float) -> 'McsTable':
        """Same efficiencies with uniformly spaced thresholds start_db + m·step_db"""
        if step_db <= 0:
            raise ValidationError("Threshold step must be positive", field="step_db")
        thresholds = db_to_linear(start_db + step_db * np.arange(self.levels))
        return McsTable(tuple(thresholds), self.efficiencies, self.n_s, self.n_c)

    def with_frame(self, n_s: int, n_c: int) -> 'McsTable':
        return McsTable(self.thresholds, self.efficiencies, n_s, n_c)

    def to_rows(self) -> List[Tuple[float, float]]:
        """(threshold_db, efficiency) rows as they appear in a table file"""
        return [(float(linear_to_db(z)), c) for z, c in zip(self.thresholds, self.efficiencies)]

    @classmethod
    def from_db_rows(cls, rows: Iterable[Sequence[float]],
                     n_s: int = frame_defaults.N_S, n_c: int = frame_defaults.N_C) -> 'McsTable':
        rows = [tuple(r) for r in rows]
        thresholds = tuple(db_to_linear(r[0]) for r in rows)
        efficiencies = tuple(r[1] for r in rows)
        return cls(thresholds, efficiencies, n_s, n_c)

    @classmethod
    def default(cls, n_s: int = frame_defaults.N_S, n_c: int = frame_defaults.N_C) -> 'McsTable':
        """The shipped 15-level CQI efficiency table"""
        return load_mcs_table(DEFAULT_MCS_TABLE, n_s=n_s, n_c=n_c)


def spectral_efficiency(z: Union[float, np.ndarray], table: McsTable) -> Union[float, np.ndarray]:
    """
    Map linear SINR to spectral efficiency

    Args:
        z: Linear SINR >= 0 (scalar or array)
        table: MCS table

    Returns:
        c_m for z in [z_m, z_{m+1}), 0 below z_1

    Raises:
        DomainError: negative or NaN SINR
    """
    arr = np.asarray(z, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("SINR must be non-negative")

    # side='right' puts z == z_m into level m
    level = np.searchsorted(np.asarray(table.thresholds), arr, side='right')
    lookup = np.concatenate(([0.0], np.asarray(table.efficiencies)))
    result = lookup[level]
    return float(result) if np.ndim(z) == 0 else result


def _parse_rows(text: str) -> List[Tuple[int, float, float]]:
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(
                f"Line {line_no}: expected 'threshold_db efficiency', got {raw.strip()!r}",
                field="row", row=line_no
            )
        try:
            rows.append((line_no, float(parts[0]), float(parts[1])))
        except ValueError:
            raise ValidationError(f"Line {line_no}: non-numeric value", field="row", row=line_no)
    return rows


def _looks_like_path(source: str) -> bool:
    """A single line that is not a 'threshold efficiency' row names a file"""
    line = source.strip()
    if '\n' in line:
        return False
    if Path(line).exists():
        return True
    parts = line.split('#', 1)[0].split()
    try:
        for part in parts:
            float(part)
    except ValueError:
        return True
    return False


def load_mcs_table(source: Union[str, Path], n_s: int = frame_defaults.N_S,
                   n_c: int = frame_defaults.N_C) -> McsTable:
    """
    Load an MCS table from a file path or from its text

    Args:
        source: Path to a table file, or the table text itself
        n_s: Symbols per resource block
        n_c: Subcarriers per resource block

    Returns:
        Validated McsTable with linear thresholds

    Raises:
        ValidationError: malformed, non-monotone, duplicate or too few rows;
            the error's row is the source line number
    """
    if isinstance(source, Path) or _looks_like_path(source):
        path = Path(source)
        if not path.exists():
            raise ValidationError(f"MCS table not found: {path}", field="source")
        text = path.read_text(encoding='utf-8')
        origin = str(path)
    else:
        text = source
        origin = '<text>'

    rows = _parse_rows(text)
    if len(rows) < 2:
        raise ValidationError(f"{origin}: an MCS table needs at least 2 rows, found {len(rows)}", field="entries")

    for (_, prev_db, prev_c), (line_no, z_db, c) in zip(rows, rows[1:]):
        if z_db == prev_db:
            raise ValidationError(f"{origin} line {line_no}: duplicate threshold {z_db} dB",
                                  field="threshold", row=line_no)
        if z_db < prev_db:
            raise ValidationError(f"{origin} line {line_no}: thresholds out of order",
                                  field="threshold", row=line_no)
        if c <= prev_c:
            raise ValidationError(f"{origin} line {line_no}: efficiencies must increase",
                                  field="efficiency", row=line_no)

    table = McsTable.from_db_rows(((z, c) for _, z, c in rows), n_s=n_s, n_c=n_c)
    logger.debug(f"Loaded {table.levels}-level MCS table from {origin}")
    return table
