"""
Slot-level Monte-Carlo simulation of windowed proportional fair scheduling

Every slot draws fresh fading for all links, forms the SINR of every
terminal on every RB, normalises it by its mean over the last W slots and
hands each RB to the terminal with the largest normalised metric. Slots are
processed in vectorised chunks; the sliding window is carried across chunk
boundaries as a short history.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from config.settings import simulator_config
from src.exceptions import DomainError, SimulationError, ValidationError
from src.models.mcs import McsTable
from src.models.population import FrameConfig
from src.models.sinr import LinkProfile, SinrDistribution
from src.simulator.fading import FadingConfig, FadingGenerator
from src.utils.helpers import chunk_sizes
from src.utils.logger import get_logger

logger = get_logger(__name__)

SINR_BASED = 'sinr'
RATE_BASED = 'rate'
RELAXED = 'relaxed'
UNIQUE = 'unique'

# Floor for an all-zero windowed rate, relative to the smallest efficiency
RATE_FLOOR_FACTOR = 1e-6

ProgressCallback = Callable[[int, int], None]


@dataclass(frozen=True)
class SimConfig:
    """Simulation run parameters; warmup defaults to the window length"""
    slots: int
    window: int = 1000
    seed: int = 0
    fading: FadingConfig = FadingConfig()
    pfs_metric: str = SINR_BASED
    mcs_rule: str = RELAXED
    warmup: Optional[int] = None
    frequency_flat: bool = False
    chunk_slots: int = simulator_config.CHUNK_SLOTS
    sample_cap: int = simulator_config.SAMPLE_CAP

    def __post_init__(self):
        if self.window < 1:
            raise ValidationError("Window must be >= 1 slot", field="window")
        if self.slots <= self.window:
            raise ValidationError(f"Need slots > window ({self.slots} <= {self.window})", field="slots")
        if self.warmup is not None and not (0 <= self.warmup < self.slots):
            raise ValidationError("Warmup must lie in [0, slots)", field="warmup")
        if not (0 <= self.seed < 2 ** 64):
            raise ValidationError("Seed must be an unsigned 64-bit integer", field="seed")
        if self.pfs_metric not in (SINR_BASED, RATE_BASED):
            raise ValidationError(f"Unknown PFS metric '{self.pfs_metric}'", field="pfs_metric")
        if self.mcs_rule not in (RELAXED, UNIQUE):
            raise ValidationError(f"Unknown MCS rule '{self.mcs_rule}'", field="mcs_rule")
        if self.chunk_slots < 1:
            raise ValidationError("chunk_slots must be >= 1", field="chunk_slots")
        if self.sample_cap < 0:
            raise ValidationError("sample_cap must be >= 0", field="sample_cap")

    @property
    def effective_warmup(self) -> int:
        return self.window if self.warmup is None else self.warmup

    @property
    def measured_slots(self) -> int:
        return self.slots - self.effective_warmup


@dataclass
class SimResult:
    """Accumulated statistics of one simulation run (post-warmup slots only)"""
    config: SimConfig
    throughput: np.ndarray
    scheduled_count: np.ndarray
    scheduled_sinr_sum: np.ndarray
    unconditional_sinr_sum: np.ndarray
    hist_edges_db: np.ndarray
    scheduled_histogram: np.ndarray
    unconditional_histogram: np.ndarray
    samples: np.ndarray
    slots_measured: int
    terminal_ids: Tuple[str, ...] = field(default=())

    @property
    def terminals(self) -> int:
        return len(self.throughput)

    @property
    def n_rb(self) -> int:
        return self.scheduled_count.shape[1]

    @property
    def scheduling_frequency(self) -> np.ndarray:
        """Share of slots each terminal won, per RB"""
        return self.scheduled_count / self.slots_measured

    @property
    def mean_unconditional_sinr(self) -> np.ndarray:
        """Per-terminal mean SINR over all slots and RBs"""
        return self.unconditional_sinr_sum.sum(axis=1) / (self.slots_measured * self.n_rb)

    @property
    def mean_scheduled_sinr(self) -> np.ndarray:
        """Per-terminal mean SINR over won RBs; NaN if never scheduled"""
        counts = self.scheduled_count.sum(axis=1)
        with np.errstate(invalid='ignore', divide='ignore'):
            return np.where(counts > 0, self.scheduled_sinr_sum.sum(axis=1) / np.maximum(counts, 1), np.nan)

    def sinr_gain(self) -> np.ndarray:
        return empirical_sinr_gain(self)

    def to_frame(self) -> pd.DataFrame:
        ids = self.terminal_ids or tuple(str(j) for j in range(self.terminals))
        with np.errstate(divide='ignore'):
            mean_db = 10.0 * np.log10(self.mean_unconditional_sinr)
        return pd.DataFrame({
            'terminal': list(ids),
            'sim_rate_bps': self.throughput,
            'scheduling_share': self.scheduling_frequency.mean(axis=1),
            'sim_mean_sinr_db': mean_db,
            'sim_sinr_gain': self.sinr_gain()
        })


def _power_arrays(links: Sequence[Sequence[LinkProfile]], n_rb: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p0 [J,N], interferer powers [J,I_max,N] zero-padded, n0 [J,N])"""
    rows = []
    for j, row in enumerate(links):
        row = list(row)
        if len(row) == 1 and n_rb > 1:
            row = row * n_rb
        if len(row) != n_rb:
            raise ValidationError(f"Terminal {j} has {len(row)} link profiles, expected {n_rb}",
                                  field="links", row=j)
        rows.append(row)
    if not rows:
        raise ValidationError("At least one terminal is required", field="links")

    terminals = len(rows)
    max_interferers = max(len(link.interferer_powers) for row in rows for link in row)
    p0 = np.zeros((terminals, n_rb))
    interferers = np.zeros((terminals, max_interferers, n_rb))
    n0 = np.zeros((terminals, n_rb))
    for j, row in enumerate(rows):
        for n, link in enumerate(row):
            p0[j, n] = link.p0
            n0[j, n] = link.n0
            interferers[j, :len(link.interferer_powers), n] = link.interferer_powers
    return p0, interferers, n0


class _WindowAverager:
    """Mean over the last W slots including the current one (growing window at startup)"""

    def __init__(self, window: int, shape: Tuple[int, ...]):
        self.window = window
        self.history = np.zeros((0,) + shape)
        self.seen = 0

    def update(self, values: np.ndarray) -> np.ndarray:
        slots = values.shape[0]
        combined = np.concatenate([self.history, values], axis=0)
        cumulative = np.concatenate([np.zeros((1,) + values.shape[1:]), np.cumsum(combined, axis=0)])

        offsets = np.arange(slots)
        counts = np.minimum(self.seen + offsets + 1, self.window)
        upper = len(self.history) + offsets + 1
        sums = cumulative[upper] - cumulative[upper - counts]

        keep = self.window - 1
        self.history = combined[max(len(combined) - keep, 0):] if keep > 0 else combined[:0]
        self.seen += slots
        return sums / counts.reshape((-1,) + (1,) * (values.ndim - 1))


def _histogram(sinr: np.ndarray, weights: np.ndarray, edges_db: np.ndarray) -> np.ndarray:
    """Per-terminal counts of SINR (dB) per bin; out-of-range values land in the end bins"""
    bins = len(edges_db) - 1
    step = edges_db[1] - edges_db[0]
    with np.errstate(divide='ignore'):
        db = 10.0 * np.log10(sinr)
    index = np.clip(np.floor((db - edges_db[0]) / step), 0, bins - 1).astype(int)
    terminals = sinr.shape[1]
    flat = index + bins * np.arange(terminals)[np.newaxis, :, np.newaxis]
    counts = np.bincount(flat.ravel(), weights=weights.ravel().astype(float), minlength=terminals * bins)
    return counts.reshape(terminals, bins)


def run_pfs(links: Sequence[Sequence[LinkProfile]], table: McsTable, cfg: SimConfig,
            frame: FrameConfig = FrameConfig(), progress: Optional[ProgressCallback] = None,
            terminal_ids: Sequence[str] = ()) -> SimResult:
    """
    Simulate windowed PFS over cfg.slots slots

    Args:
        links: |J| x N LinkProfile matrix (|J| x 1 reuses one profile on every RB)
        table: MCS table (its N_S, N_C set the payload per RB)
        cfg: Run parameters
        frame: Frame constants (N and T_TTI)
        progress: Called as progress(done_slots, total_slots) after every chunk
        terminal_ids: Labels carried into SimResult.to_frame()

    Returns:
        SimResult

    Raises:
        ValidationError: Inconsistent inputs
        SimulationError: Non-finite SINR during the run
    """
    n_rb = frame.n_rb
    p0, interferer_powers, n0 = _power_arrays(links, n_rb)
    terminals, max_interferers = interferer_powers.shape[:2]
    fading_rbs = 1 if cfg.frequency_flat else n_rb

    rng = np.random.default_rng(cfg.seed)
    fading = FadingGenerator(cfg.fading, (terminals, 1 + max_interferers, fading_rbs), rng)
    averager = _WindowAverager(cfg.window, (terminals, n_rb))

    warmup = cfg.effective_warmup
    payload = table.payload_scale
    rate_floor = min(table.efficiencies) * RATE_FLOOR_FACTOR
    edges_db = np.arange(simulator_config.HIST_MIN_DB,
                         simulator_config.HIST_MAX_DB + simulator_config.HIST_STEP_DB,
                         simulator_config.HIST_STEP_DB)

    bits = np.zeros(terminals)
    scheduled_count = np.zeros((terminals, n_rb), dtype=np.int64)
    scheduled_sum = np.zeros((terminals, n_rb))
    unconditional_sum = np.zeros((terminals, n_rb))
    scheduled_hist = np.zeros((terminals, len(edges_db) - 1))
    unconditional_hist = np.zeros((terminals, len(edges_db) - 1))
    samples = np.empty((min(cfg.sample_cap, cfg.measured_slots), terminals, n_rb))
    stored = 0
    terminal_axis = np.arange(terminals)[np.newaxis, :, np.newaxis]

    logger.info(f"PFS simulation: {terminals} terminals, {n_rb} RBs, {cfg.slots} slots, "
                f"W={cfg.window}, fading={cfg.fading.describe()}, metric={cfg.pfs_metric}, "
                f"MCS rule={cfg.mcs_rule}, seed={cfg.seed}")

    start = 0
    for slots in chunk_sizes(cfg.slots, cfg.chunk_slots):
        gains = fading.next_chunk(slots)
        signal = p0 * gains[:, :, 0, :]
        interference = (interferer_powers * gains[:, :, 1:, :]).sum(axis=2)
        sinr = signal / (interference + n0)
        if not np.all(np.isfinite(sinr)):
            raise SimulationError(f"Non-finite SINR in slots {start}..{start + slots - 1}")

        efficiency = table.spectral_efficiency(sinr)
        if cfg.pfs_metric == SINR_BASED:
            metric = sinr / averager.update(sinr)
        else:
            average = averager.update(efficiency)
            metric = efficiency / np.where(average > 0.0, average, rate_floor)

        # argmax keeps the first maximum: ties go to the lowest terminal index
        winners = np.argmax(metric, axis=1)
        won = terminal_axis == winners[:, np.newaxis, :]

        first = max(warmup - start, 0)
        if first < slots:
            sinr_m, won_m, eff_m = sinr[first:], won[first:], efficiency[first:]
            if cfg.mcs_rule == RELAXED:
                bits += payload * (eff_m * won_m).sum(axis=(0, 2))
            else:
                lowest = np.where(won_m, sinr_m, np.inf).min(axis=2)
                count = won_m.sum(axis=2)
                unique_eff = table.spectral_efficiency(np.where(count > 0, lowest, 0.0))
                bits += payload * (count * unique_eff).sum(axis=0)

            scheduled_count += won_m.sum(axis=0)
            scheduled_sum += (sinr_m * won_m).sum(axis=0)
            unconditional_sum += sinr_m.sum(axis=0)
            scheduled_hist += _histogram(sinr_m, won_m, edges_db)
            unconditional_hist += _histogram(sinr_m, np.ones_like(sinr_m), edges_db)

            take = min(len(samples) - stored, len(sinr_m))
            if take > 0:
                samples[stored:stored + take] = sinr_m[:take]
                stored += take

        start += slots
        logger.debug(f"Simulated {start}/{cfg.slots} slots")
        if progress is not None:
            progress(start, cfg.slots)

    measured = cfg.measured_slots
    throughput = bits / (measured * frame.t_tti)
    logger.info(f"PFS simulation finished: mean throughput {throughput.mean():.6g} bit/s")

    return SimResult(
        config=cfg,
        throughput=throughput,
        scheduled_count=scheduled_count,
        scheduled_sinr_sum=scheduled_sum,
        unconditional_sinr_sum=unconditional_sum,
        hist_edges_db=edges_db,
        scheduled_histogram=scheduled_hist,
        unconditional_histogram=unconditional_hist,
        samples=samples[:stored],
        slots_measured=measured,
        terminal_ids=tuple(terminal_ids)
    )


def empirical_sinr_gain(result: SimResult) -> np.ndarray:
    """
    Mean scheduled SINR over mean unconditional SINR, per terminal

    Terminals that were never scheduled get NaN (undefined gain).
    """
    return result.mean_scheduled_sinr / result.mean_unconditional_sinr


def relative_error(model_rate, sim_rate):
    """
    ε = |R - R'| / R' · 100

    Args:
        model_rate: Model rate(s) in bit/s
        sim_rate: Simulated rate(s) in bit/s

    Returns:
        Percent error; NaN where the simulated rate is zero or undefined

    Raises:
        DomainError: Negative simulated rate
    """
    model = np.asarray(model_rate, dtype=float)
    sim = np.asarray(sim_rate, dtype=float)
    if np.any(sim < 0):
        raise DomainError("Simulated rate must be non-negative")
    with np.errstate(divide='ignore', invalid='ignore'):
        error = np.where(sim > 0, np.abs(model - sim) / np.where(sim > 0, sim, 1.0) * 100.0, np.nan)
    return float(error) if error.ndim == 0 else error


def ks_statistic(result: SimResult, dist: SinrDistribution, j: int, rb: int = 0) -> float:
    """Kolmogorov-Smirnov distance between recorded SINR samples of (j, rb) and dist"""
    if len(result.samples) == 0:
        raise SimulationError("Run recorded no SINR samples (sample_cap = 0?)")
    return float(stats.kstest(result.samples[:, j, rb], dist.cdf).statistic)


def ks_critical_value(samples: int, alpha: float = 0.01) -> float:
    """One-sample KS acceptance threshold; ~1.63/sqrt(n) at alpha = 0.01"""
    if samples < 1:
        raise DomainError("Need at least one sample")
    return float(stats.kstwo.ppf(1.0 - alpha, samples))
