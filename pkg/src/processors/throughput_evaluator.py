"""
Throughput evaluation - run the requested models (and optionally the
simulator) over a scenario and assemble the per-terminal report
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import oracle_config
from src.exceptions import UsageError
from src.models import baselines
from src.models.analytic import (
    relaxed_mcs_rate,
    ultra_dense_relaxed_throughput,
    unique_mcs_rate
)
from src.models.mcs import McsTable
from src.models.population import CellPopulation
from src.scenario.builder import compute_link_profiles
from src.scenario.schema import CellScenario
from src.simulator.pfs_simulator import SimConfig, SimResult, relative_error, run_pfs
from src.utils.helpers import parse_list_option
from src.utils.logger import get_logger

logger = get_logger(__name__)

EXACT_RELAXED = 'exact_relaxed'
EXACT_UNIQUE = 'exact_unique'
ULTRA_DENSE = 'ultra_dense'
SIMPLE = 'simple'
IAN = 'ian'
GAUSSIAN = 'gaussian'
IID_PRIORITY = 'iid_priority'
UNIQUE_IAN = 'unique_ian'

MODEL_NAMES = (EXACT_RELAXED, EXACT_UNIQUE, ULTRA_DENSE, SIMPLE, IAN, GAUSSIAN, IID_PRIORITY, UNIQUE_IAN)
PER_TERMINAL_MODELS = (EXACT_RELAXED, EXACT_UNIQUE)

SIM_COLUMN = 'sim_bps'


def rate_column(model: str) -> str:
    return f'{model}_bps'


def error_column(model: str) -> str:
    return f'eps_{model}_pct'


@dataclass
class ThroughputReport:
    """
    Per-terminal report

    frame holds one row per terminal; failed (terminal, model) cells are NaN
    in the frame and listed in errors with the exception class name.
    """
    frame: pd.DataFrame
    models: Tuple[str, ...]
    simulated: bool = False
    errors: Dict[Tuple[str, str], str] = field(default_factory=dict)
    fallbacks: List[str] = field(default_factory=list)
    sim_result: Optional[SimResult] = None

    @property
    def has_failures(self) -> bool:
        return bool(self.errors)

    def rates(self, model: str) -> np.ndarray:
        return self.frame[rate_column(model)].to_numpy(dtype=float)


def parse_models(text: Optional[str]) -> Tuple[str, ...]:
    """
    Parse a comma-separated model list ('all' selects every model)

    Raises:
        UsageError: Unknown model name
    """
    names = parse_list_option(text)
    if not names:
        return ()
    if names == ['all']:
        return MODEL_NAMES
    unknown = [name for name in names if name not in MODEL_NAMES]
    if unknown:
        raise UsageError(f"Unknown model(s): {', '.join(unknown)}; choose from {', '.join(MODEL_NAMES)}")
    return tuple(names)


class ThroughputEvaluator:
    """Evaluate throughput models on a scenario"""

    def __init__(self, table: McsTable, threads: Optional[int] = None,
                 on_degenerate: str = 'product', cross_check: bool = False):
        """
        Initialize evaluator

        Args:
            table: MCS table; its N_S, N_C are replaced by each scenario's frame
            threads: Worker threads for per-terminal models (default PFS_ORACLE_THREADS)
            on_degenerate: Root-degeneracy policy when building exact laws
            cross_check: Verify closed-form intervals against quadrature
        """
        self.table = table
        self.threads = threads or oracle_config.THREADS
        self.on_degenerate = on_degenerate
        self.cross_check = cross_check

    def evaluate(self, scenario: CellScenario, models: Sequence[str],
                 sim_config: Optional[SimConfig] = None,
                 progress: Optional[Callable[[int, int], None]] = None) -> ThroughputReport:
        """
        Run every requested model, plus the simulator when sim_config is given

        Args:
            scenario: Validated scenario
            models: Model names from MODEL_NAMES
            sim_config: Simulation parameters, or None for models only
            progress: Forwarded to the simulator

        Returns:
            ThroughputReport

        Raises:
            UsageError: Nothing requested
        """
        models = tuple(models)
        if not models and sim_config is None:
            raise UsageError("Request at least one model or a simulation")

        frame_cfg = scenario.frame_config
        table = self.table.with_frame(frame_cfg.n_s, frame_cfg.n_c)
        links = compute_link_profiles(scenario)
        ian = np.array([[link.ian_sinr for link in row] for row in links])
        ids = [t.id for t in scenario.terminals]
        terminals = len(ids)

        logger.info(f"Evaluating {', '.join(models) or 'no models'} for {terminals} terminals "
                    f"on {frame_cfg.n_rb} RBs")

        errors: Dict[Tuple[str, str], str] = {}
        fallbacks: List[str] = []

        pop = None
        needs_population = any(m in (EXACT_RELAXED, EXACT_UNIQUE, IID_PRIORITY) for m in models)
        if needs_population:
            try:
                pop = CellPopulation.from_links(links, frame_cfg, on_degenerate=self.on_degenerate)
            except Exception as e:
                logger.error(f"Could not build SINR laws: {e}")
                for model in (EXACT_RELAXED, EXACT_UNIQUE, IID_PRIORITY):
                    if model in models:
                        errors.update({(tid, model): type(e).__name__ for tid in ids})

        mean_sinr = pop.mean_matrix().mean(axis=1) if pop is not None else ian.mean(axis=1)
        with np.errstate(divide='ignore'):
            mean_db = 10.0 * np.log10(mean_sinr)

        data = {
            'terminal': ids,
            'x': [t.position[0] for t in scenario.terminals],
            'y': [t.position[1] for t in scenario.terminals],
            'mean_sinr_db': mean_db
        }

        for model in models:
            rates = np.full(terminals, np.nan)
            if any((tid, model) in errors for tid in ids):
                data[rate_column(model)] = rates
                continue
            if model in PER_TERMINAL_MODELS:
                for j, (rate, error, notes) in enumerate(self._per_terminal(model, pop, table)):
                    fallbacks.extend(notes)
                    if error is None:
                        rates[j] = rate
                    else:
                        errors[(ids[j], model)] = error
            else:
                try:
                    rates = self._whole_population(model, ian, pop, table, frame_cfg)
                except Exception as e:
                    logger.error(f"Model {model} failed: {e}")
                    errors.update({(tid, model): type(e).__name__ for tid in ids})
            data[rate_column(model)] = rates

        report_frame = pd.DataFrame(data)

        sim_result = None
        if sim_config is not None:
            sim_result = run_pfs(links, table, sim_config, frame_cfg, progress=progress, terminal_ids=ids)
            report_frame[SIM_COLUMN] = sim_result.throughput
            report_frame['sim_sinr_gain'] = sim_result.sinr_gain()
            for model in models:
                report_frame[error_column(model)] = relative_error(
                    report_frame[rate_column(model)].to_numpy(), sim_result.throughput
                )

        if errors:
            logger.warning(f"{len(errors)} terminal/model evaluations failed")
        logger.info("Evaluation finished")
        return ThroughputReport(report_frame, models, sim_config is not None, errors, fallbacks, sim_result)

    def _per_terminal(self, model: str, pop: CellPopulation,
                      table: McsTable) -> List[Tuple[float, Optional[str], List[str]]]:
        def run(j: int) -> Tuple[float, Optional[str], List[str]]:
            try:
                if model == EXACT_RELAXED:
                    result = relaxed_mcs_rate(j, pop, table, cross_check=self.cross_check)
                else:
                    result = unique_mcs_rate(j, pop, table)
                return result.rate, None, result.fallbacks
            except Exception as e:
                logger.error(f"Model {model}, terminal {j}: {e}")
                return np.nan, type(e).__name__, []

        workers = min(self.threads, pop.terminals)
        if workers <= 1:
            return [run(j) for j in range(pop.terminals)]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(run, range(pop.terminals)))

    def _whole_population(self, model: str, ian: np.ndarray, pop: Optional[CellPopulation],
                          table: McsTable, frame_cfg) -> np.ndarray:
        terminals, n_rb = ian.shape
        if model == SIMPLE:
            return baselines.simple_throughput(ian, table, frame_cfg)
        if model == IAN:
            return baselines.ian_throughput(ian, table, frame_cfg, cross_check=self.cross_check)
        if model == GAUSSIAN:
            return baselines.gaussian_throughput(ian, table, frame_cfg)
        if model == IID_PRIORITY:
            return baselines.iid_priority_throughput(pop, table, cross_check=self.cross_check)
        if model == UNIQUE_IAN:
            return baselines.unique_mcs_ian_throughput(ian[:, 0], terminals, n_rb, table, frame_cfg,
                                                       threads=self.threads)
        if model == ULTRA_DENSE:
            # the dense limit of each terminal is exponential with mean Z̃
            return sum(
                ultra_dense_relaxed_throughput(ian[:, n], terminals, 1, table, frame_cfg.t_tti)
                for n in range(n_rb)
            )
        raise UsageError(f"Unknown model '{model}'")
