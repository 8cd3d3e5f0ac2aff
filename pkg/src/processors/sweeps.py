"""
Parameter sweeps: SINR-gain table and ultra-dense convergence
"""
from typing import Optional

import numpy as np
import pandas as pd

from src.exceptions import DomainError
from src.models.analytic import pfs_sinr_gain, relaxed_mcs_throughput, ultra_dense_relaxed_throughput
from src.models.mcs import McsTable
from src.models.population import CellPopulation
from src.models.sinr import asymptotic_distribution
from src.scenario.builder import compute_link_profiles, split_interference
from src.scenario.schema import CellScenario
from src.utils.helpers import harmonic_number
from src.utils.logger import get_logger

logger = get_logger(__name__)


def gain_table(max_terminals: int) -> pd.DataFrame:
    """
    PFS SINR gain for |J| = 1..max_terminals

    Columns: terminals, analytic_gain (alternating sum), harmonic_number
    (H_J), increment (G(J) - G(J-1)).
    """
    if max_terminals < 1:
        raise DomainError("max_terminals must be >= 1")
    rows = []
    previous = 0.0
    for count in range(1, max_terminals + 1):
        gain = pfs_sinr_gain(count)
        rows.append({
            'terminals': count,
            'analytic_gain': gain,
            'harmonic_number': harmonic_number(count),
            'increment': gain - previous
        })
        previous = gain
    return pd.DataFrame(rows)


def convergence_sweep(scenario: CellScenario, table: McsTable, doublings: int = 6,
                      threads: Optional[int] = None) -> pd.DataFrame:
    """
    Split every terminal's interference over I = 1, 2, 4, ..., 2^doublings
    equal interferers (total power fixed) and compare with the exponential limit

    Returns:
        DataFrame with columns interferers, sup_distance (max over terminals of
        the sup-norm CDF distance to the limit law) and rate_gap_pct (max over
        terminals of the relaxed-MCS rate gap to the ultra-dense model, percent)
    """
    if doublings < 0:
        raise DomainError("doublings must be >= 0")

    frame_cfg = scenario.frame_config
    table = table.with_frame(frame_cfg.n_s, frame_cfg.n_c)
    links = [row[0] for row in compute_link_profiles(scenario)]
    terminals = len(links)

    limits = [asymptotic_distribution(link.p0, link.total_interference, link.n0) for link in links]
    dense = ultra_dense_relaxed_throughput([link.ian_sinr for link in links], terminals,
                                           frame_cfg.n_rb, table, frame_cfg.t_tti)

    rows = []
    for k in range(doublings + 1):
        count = 2 ** k
        split = [split_interference(link, count) if link.interferer_powers else link for link in links]
        # equal powers leave no distinct roots; keep the product form
        pop = CellPopulation.from_links([[link] for link in split], frame_cfg, on_degenerate='product')

        distance = max(pop.distribution(j).sup_distance(limits[j]) for j in range(terminals))
        exact = relaxed_mcs_throughput(pop, table, threads=threads).rates
        gap = float(np.max(np.abs(exact - dense) / dense)) * 100.0

        logger.info(f"I={count}: sup distance {distance:.3e}, rate gap {gap:.3f}%")
        rows.append({'interferers': count, 'sup_distance': distance, 'rate_gap_pct': gap})
    return pd.DataFrame(rows)
