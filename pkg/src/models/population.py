"""
Cell population: per-terminal, per-RB SINR laws plus OFDMA frame constants
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from config.settings import frame_defaults
from src.exceptions import ValidationError
from src.models.sinr import (
    LinkProfile,
    SinrDistribution,
    build_distribution,
    exponential_distribution
)


@dataclass(frozen=True)
class FrameConfig:
    """OFDMA frame constants: N RBs of N_S x N_C symbols every T_TTI seconds, PFS window W"""
    n_rb: int = frame_defaults.N_RB
    n_s: int = frame_defaults.N_S
    n_c: int = frame_defaults.N_C
    t_tti: float = frame_defaults.T_TTI
    window: int = frame_defaults.WINDOW

    def __post_init__(self):
        if self.n_rb < 1:
            raise ValidationError("N must be >= 1", field="n_rb")
        if self.n_s < 1 or self.n_c < 1:
            raise ValidationError("N_S and N_C must be >= 1", field="n_s/n_c")
        if not self.t_tti > 0:
            raise ValidationError("T_TTI must be positive", field="t_tti")
        if self.window < 1:
            raise ValidationError("Window must be >= 1 slot", field="window")

    @property
    def rate_scale(self) -> float:
        """N_S·N_C/T_TTI, symbols per second carried by one RB"""
        return self.n_s * self.n_c / self.t_tti


@dataclass(frozen=True)
class CellPopulation:
    """
    |J| x N matrix of SINR laws sharing one frame

    distributions[j][n] is the law of terminal j on resource block n.
    """
    distributions: Tuple[Tuple[SinrDistribution, ...], ...]
    frame: FrameConfig = FrameConfig()

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.distributions)
        object.__setattr__(self, 'distributions', rows)
        if not rows:
            raise ValidationError("A population needs at least one terminal", field="terminals")
        for j, row in enumerate(rows):
            if len(row) != self.frame.n_rb:
                raise ValidationError(
                    f"Terminal {j} has {len(row)} RB laws, frame has N={self.frame.n_rb}",
                    field="distributions", row=j
                )
            for dist in row:
                if not np.isfinite(dist.mean):
                    raise ValidationError(f"Terminal {j} has an infinite mean SINR (no noise)",
                                          field="distributions", row=j)

    @property
    def terminals(self) -> int:
        return len(self.distributions)

    @property
    def n_rb(self) -> int:
        return self.frame.n_rb

    def distribution(self, j: int, rb: int = 0) -> SinrDistribution:
        return self.distributions[j][rb]

    def rb_laws(self, rb: int) -> Tuple[SinrDistribution, ...]:
        """Laws of all terminals on one resource block"""
        return tuple(row[rb] for row in self.distributions)

    def mean_matrix(self) -> np.ndarray:
        return np.array([[d.mean for d in row] for row in self.distributions])

    def is_homogeneous(self, j: Optional[int] = None) -> bool:
        """True when every RB of terminal j (or of every terminal) shares one law"""
        indices = range(self.terminals) if j is None else [j]
        return all(all(d == self.distributions[k][0] for d in self.distributions[k]) for k in indices)

    def is_exponential(self) -> bool:
        return all(d.is_exponential for row in self.distributions for d in row)

    def with_frame(self, frame: FrameConfig) -> 'CellPopulation':
        """Same laws on a different frame; per-RB laws must be homogeneous"""
        if not self.is_homogeneous():
            raise ValidationError("Only homogeneous populations can change their RB count", field="frame")
        return CellPopulation(tuple((row[0],) * frame.n_rb for row in self.distributions), frame)

    @classmethod
    def from_links(cls, links: Sequence[Sequence[LinkProfile]], frame: FrameConfig = FrameConfig(),
                   on_degenerate: str = 'raise') -> 'CellPopulation':
        """
        Build every terminal's per-RB law

        Args:
            links: |J| x N LinkProfile matrix, or |J| x 1 to reuse one profile on every RB
            frame: Frame constants
            on_degenerate: passed to build_distribution

        Returns:
            CellPopulation
        """
        rows = []
        cache = {}
        for row in links:
            row = list(row)
            if len(row) == 1 and frame.n_rb > 1:
                row = row * frame.n_rb
            laws = []
            for link in row:
                if link not in cache:
                    cache[link] = build_distribution(link, on_degenerate=on_degenerate)
                laws.append(cache[link])
            rows.append(tuple(laws))
        return cls(tuple(rows), frame)

    @classmethod
    def from_distributions(cls, laws: Sequence[SinrDistribution],
                           frame: FrameConfig = FrameConfig()) -> 'CellPopulation':
        """One law per terminal, repeated on every RB"""
        return cls(tuple((law,) * frame.n_rb for law in laws), frame)

    @classmethod
    def from_exponential_means(cls, means: Sequence[float],
                               frame: FrameConfig = FrameConfig()) -> 'CellPopulation':
        """Exponential laws with the given mean SINRs, homogeneous over RBs"""
        return cls.from_distributions([exponential_distribution(m) for m in means], frame)
