"""
Literature approximations of expected PFS throughput

All of them replace the fading interference by its mean in some way (IaN
SINR Z̃ = p0/(P + N0)) or ignore the priority structure; they are cheap and
never fall back to the exact model's machinery.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import special

from src.exceptions import DomainError, ValidationError
from src.models.analytic import disagrees, unique_mcs_throughput
from src.models.mcs import McsTable
from src.models.population import CellPopulation, FrameConfig
from src.models.sinr import LinkProfile
from src.numerics import integrate, integrate_piecewise
from src.utils.logger import get_logger

logger = get_logger(__name__)

GAUSSIAN_LOWER_LIMITS = ('zero', 'clamped')

MatrixLike = Union[Sequence[float], Sequence[Sequence[float]], np.ndarray]


@dataclass(frozen=True)
class IanSinr:
    """Average-power SINR Z̃ = p0/(P + N0) of one terminal on one RB"""
    tilde_z: float

    def __post_init__(self):
        if not (np.isfinite(self.tilde_z) and self.tilde_z > 0):
            raise DomainError(f"IaN SINR must be positive, got {self.tilde_z}")

    @classmethod
    def from_link(cls, link: LinkProfile) -> 'IanSinr':
        return cls(link.ian_sinr)


@dataclass(frozen=True)
class GaussianRateParams:
    """Mean and standard deviation of the per-RB rate (bits/symbol) under IaN"""
    mu: float
    sigma: float


def _as_matrix(tilde_z: MatrixLike, frame: FrameConfig) -> np.ndarray:
    """|J| x N matrix of Z̃; a vector is repeated over the frame's RBs"""
    def plain(v):
        return v.tilde_z if isinstance(v, IanSinr) else v

    rows = [[plain(v) for v in row] if np.ndim(row) else [plain(row)] for row in tilde_z]
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise ValidationError("IaN SINRs must form a |J| x N matrix", field="tilde_z")
    values = np.asarray(rows, dtype=float)
    if values.shape[1] == 1 and frame.n_rb > 1:
        values = np.repeat(values, frame.n_rb, axis=1)
    if values.shape[1] != frame.n_rb:
        raise ValidationError(f"Expected {frame.n_rb} RB columns, got {values.shape[1]}", field="tilde_z")
    if values.size == 0 or np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise DomainError("IaN SINRs must be positive and finite")
    return values


def _exponential_interval_masses(mean: float, table: McsTable) -> np.ndarray:
    """P(Z ∈ A_m) for exponential Z with the given mean"""
    survival = np.exp(-np.asarray(table.interval_edges()) / mean)
    return survival[:-1] - survival[1:]


def simple_throughput(tilde_z: MatrixLike, table: McsTable, frame: FrameConfig = FrameConfig(),
                      terminals: Optional[int] = None) -> np.ndarray:
    """
    R_j = Σ_n N_S N_C·C(Z̃_{j,n}) / (|J|·T_TTI)

    No scheduling gain and no fading.
    """
    values = _as_matrix(tilde_z, frame)
    terminals = terminals or values.shape[0]
    efficiency = table.spectral_efficiency(values)
    return table.payload_scale * efficiency.sum(axis=1) / (terminals * frame.t_tti)


def ian_throughput(tilde_z: MatrixLike, table: McsTable, frame: FrameConfig = FrameConfig(),
                   cross_check: bool = True) -> np.ndarray:
    """
    Rate integral with exponential SINR laws of mean Z̃

    The normalised competitors of an exponential law are identically
    distributed, so each interval contributes c_m (F^{|J|}(z_{m+1}) - F^{|J|}(z_m))/|J|.

    Args:
        tilde_z: |J| x N (or |J|) IaN SINRs
        table: MCS table
        frame: Frame constants
        cross_check: Verify each interval against quadrature of F^{|J|-1} f

    Returns:
        Rates in bit/s
    """
    values = _as_matrix(tilde_z, frame)
    terminals = values.shape[0]
    edges = np.asarray(table.interval_edges())
    efficiencies = np.asarray(table.efficiencies)
    scale = table.payload_scale / frame.t_tti

    rates = np.zeros(terminals)
    for j in range(terminals):
        for mean in values[j]:
            powered = (-np.expm1(-edges / mean)) ** terminals
            masses = np.diff(powered) / terminals
            if cross_check:
                _cross_check_exponential(mean, terminals, table, masses)
            rates[j] += scale * float(efficiencies @ masses)
    return rates


def _cross_check_exponential(mean: float, terminals: int, table: McsTable, masses: np.ndarray):
    def integrand(z: float) -> float:
        return math.exp(-z / mean) / mean * (-math.expm1(-z / mean)) ** (terminals - 1)

    for (lower, upper, _), closed in zip(table.intervals(), masses):
        reference = integrate(integrand, lower, upper, scale=mean)
        if disagrees(closed, reference):
            logger.warning(f"IaN interval [{lower:.4g}, {upper:.4g}) closed form {closed:.10g} "
                           f"vs quadrature {reference:.10g}")


def gaussian_rate_params(tilde_z: float, table: McsTable) -> GaussianRateParams:
    """
    μ = ∫ C(Z̃ z) e^{-z} dz and σ² = ∫ C(Z̃ z)² e^{-z} dz - μ²

    Both integrals of the step function are sums of exponential interval masses.
    """
    masses = _exponential_interval_masses(tilde_z, table)
    efficiencies = np.asarray(table.efficiencies)
    mu = float(efficiencies @ masses)
    second = float((efficiencies ** 2) @ masses)
    return GaussianRateParams(mu=mu, sigma=math.sqrt(max(second - mu * mu, 0.0)))


def _gaussian_rb_rate(j: int, params: Sequence[GaussianRateParams], lower_limit: str) -> float:
    """∫ max(zσ_j + μ_j, 0) φ(z) Π_g Φ(k_g z) dz in bits/symbol"""
    own = params[j]
    if own.mu <= 0.0:
        return 0.0
    others = [p for g, p in enumerate(params) if g != j]

    if own.sigma == 0.0:
        # deterministic rate: metric R/μ is exactly 1
        weight = 1.0 if lower_limit == 'clamped' else 0.5
        for g, p in enumerate(params):
            if g == j:
                continue
            if p.sigma > 0.0:
                weight *= 0.5
            elif p.mu > own.mu or (p.mu == own.mu and g < j):
                return 0.0
        return own.mu * weight

    slopes = np.array([
        math.inf if p.sigma == 0.0 else p.mu * own.sigma / (own.mu * p.sigma)
        for p in others
    ])

    def integrand(z: float) -> float:
        rate = z * own.sigma + own.mu
        if rate <= 0.0:
            return 0.0
        value = rate * math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        for k in slopes:
            if math.isinf(k):
                value *= 1.0 if z > 0 else (0.5 if z == 0 else 0.0)
            else:
                value *= special.ndtr(k * z)
        return value

    total = integrate(integrand, 0.0, math.inf)
    if lower_limit == 'clamped':
        total += integrate(integrand, -own.mu / own.sigma, 0.0)
    return total


def gaussian_throughput(tilde_z: MatrixLike, table: McsTable, frame: FrameConfig = FrameConfig(),
                        lower_limit: str = 'zero') -> np.ndarray:
    """
    Gaussian rate-surrogate approximation

    R_j = Σ_n (N_S N_C/T_TTI) ∫ (zσ_j + μ_j) φ(z) Π_{g≠j} Φ(μ_g σ_j/(μ_j σ_g)·z) dz

    Args:
        tilde_z: |J| x N (or |J|) IaN SINRs
        table: MCS table
        frame: Frame constants
        lower_limit: 'zero' integrates over z >= 0 as the model is usually written;
            'clamped' integrates the whole line with the rate clamped at 0

    Returns:
        Rates in bit/s
    """
    if lower_limit not in GAUSSIAN_LOWER_LIMITS:
        raise ValidationError(f"Unknown lower limit '{lower_limit}'", field="lower_limit")
    values = _as_matrix(tilde_z, frame)
    terminals, n_rb = values.shape
    scale = table.payload_scale / frame.t_tti

    rates = np.zeros(terminals)
    for n in range(n_rb):
        params = [gaussian_rate_params(values[j, n], table) for j in range(terminals)]
        for j in range(terminals):
            rates[j] += scale * _gaussian_rb_rate(j, params, lower_limit)
    return rates


def iid_priority_throughput(pop: CellPopulation, table: McsTable, cross_check: bool = True) -> np.ndarray:
    """
    R_j = Σ_n (N_S N_C/T_TTI) ∫ C(z) F_j^{|J|-1}(z) f_j(z) dz with terminal j's own law

    With u = F_j(z) the interval integrals are (F_j^{|J|}(z_{m+1}) - F_j^{|J|}(z_m))/|J|.
    """
    terminals = pop.terminals
    edges = np.asarray(table.interval_edges())
    efficiencies = np.asarray(table.efficiencies)
    scale = table.payload_scale / pop.frame.t_tti

    rates = np.zeros(terminals)
    for j in range(terminals):
        for rb in range(pop.n_rb):
            law = pop.distribution(j, rb)
            cdf = np.append(law.cdf(edges[:-1]), 1.0)
            masses = np.diff(cdf ** terminals) / terminals
            if cross_check:
                for (lower, upper, _), closed in zip(table.intervals(), masses):
                    reference = integrate_piecewise(
                        lambda z: law.cdf(z) ** (terminals - 1) * law.pdf(z), lower, upper, law.scales()
                    )
                    if disagrees(closed, reference):
                        logger.warning(f"i.i.d.-priority terminal {j}: closed form {closed:.10g} "
                                       f"vs quadrature {reference:.10g}")
            rates[j] += scale * float(efficiencies @ masses)
    return rates


def unique_mcs_ian_throughput(tilde_z: Sequence[float], terminals: Optional[int], n_rb: int,
                              table: McsTable, frame: FrameConfig = FrameConfig(),
                              threads: Optional[int] = None) -> np.ndarray:
    """
    Unique-MCS model run on exponential laws with means Z̃ (one per terminal)

    Args:
        tilde_z: Per-terminal IaN SINR (homogeneous over RBs)
        terminals: |J| (must match len(tilde_z) when given)
        n_rb: N
        table: MCS table
        frame: Frame constants (its n_rb is replaced by n_rb)

    Returns:
        Rates in bit/s
    """
    means = [v.tilde_z if isinstance(v, IanSinr) else float(v) for v in tilde_z]
    if terminals is not None and terminals != len(means):
        raise ValidationError(f"|J|={terminals} but {len(means)} IaN SINRs given", field="terminals")
    run_frame = FrameConfig(n_rb, frame.n_s, frame.n_c, frame.t_tti, frame.window)
    pop = CellPopulation.from_exponential_means(means, run_frame)
    return unique_mcs_throughput(pop, table, threads=threads).rates
