"""
Rayleigh fading power gains for the slot-level simulator

Two processes, both with unit-mean exponential marginals |h|^2:
- iid: fresh draw every slot
- gauss_markov: h(t) = ρ h(t-1) + sqrt(1-ρ²) w(t) on circular complex Gaussians
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.signal import lfilter

from src.exceptions import SimulationError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

IID = 'iid'
GAUSS_MARKOV = 'gauss_markov'


@dataclass(frozen=True)
class FadingConfig:
    """
    Fading process selection

    doppler_norm in [0, 1) sets the recursion coefficient ρ = 1 - doppler_norm:
    0 freezes the channel for the whole run, values near 1 approach iid.
    """
    kind: str = IID
    doppler_norm: float = 1.0

    def __post_init__(self):
        if self.kind not in (IID, GAUSS_MARKOV):
            raise ValidationError(f"Unknown fading model '{self.kind}'", field="fading")
        if self.kind == GAUSS_MARKOV and not (0.0 <= self.doppler_norm < 1.0):
            raise ValidationError("doppler_norm must lie in [0, 1)", field="fading")

    @property
    def rho(self) -> float:
        return 0.0 if self.kind == IID else 1.0 - self.doppler_norm

    @classmethod
    def parse(cls, text: str) -> 'FadingConfig':
        """
        Parse 'iid' or 'gm:RHO' (RHO is the lag-1 coefficient of the complex gain)

        Raises:
            ValidationError: Malformed option
        """
        text = text.strip().lower()
        if text == IID:
            return cls()
        if text.startswith('gm:'):
            try:
                rho = float(text[3:])
            except ValueError:
                raise ValidationError(f"Bad Gauss-Markov coefficient in '{text}'", field="fading")
            if not (0.0 < rho <= 1.0):
                raise ValidationError("Gauss-Markov coefficient must lie in (0, 1]", field="fading")
            return cls(GAUSS_MARKOV, 1.0 - rho)
        raise ValidationError(f"Fading must be 'iid' or 'gm:RHO', got '{text}'", field="fading")

    def describe(self) -> str:
        return IID if self.kind == IID else f"gm:{self.rho:g}"


def _complex_normal(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    draws = rng.standard_normal(shape + (2,))
    return (draws[..., 0] + 1j * draws[..., 1]) / math.sqrt(2.0)


class FadingGenerator:
    """
    Produces chunks of power gains with shape (slots, *link_shape)

    The Gauss-Markov state is carried between chunks so a run split into
    chunks is the same process as one long draw.
    """

    def __init__(self, config: FadingConfig, link_shape: Tuple[int, ...], rng: np.random.Generator):
        self.config = config
        self.link_shape = tuple(link_shape)
        self.rng = rng
        self._state: Optional[np.ndarray] = None

    def next_chunk(self, slots: int) -> np.ndarray:
        """
        Draw the next `slots` slots of |h|^2

        Raises:
            SimulationError: The recursion produced non-finite gains
        """
        shape = (slots,) + self.link_shape
        if self.config.kind == IID:
            return self.rng.exponential(1.0, size=shape)

        rho = self.config.rho
        if self._state is None:
            self._state = _complex_normal(self.rng, self.link_shape)
        innovation = _complex_normal(self.rng, shape)
        zi = (rho * self._state)[np.newaxis, ...]
        gains, _ = lfilter([math.sqrt(1.0 - rho * rho)], [1.0, -rho], innovation, axis=0, zi=zi)
        self._state = gains[-1]

        power = np.abs(gains) ** 2
        if not np.all(np.isfinite(power)):
            raise SimulationError("Non-finite fading gain in Gauss-Markov recursion")
        return power


def lag_autocorrelation(series: np.ndarray, lag: int = 1) -> float:
    """Sample autocorrelation of a 1-D series at the given lag"""
    series = np.asarray(series, dtype=float)
    if lag < 1 or lag >= len(series):
        raise ValidationError("lag must be in [1, len(series))", field="lag")
    centred = series - series.mean()
    variance = float(centred @ centred)
    if variance == 0.0:
        return 1.0
    return float(centred[:-lag] @ centred[lag:]) / variance
