"""
Expected PFS throughput: closed-form relaxed-MCS model, unique-MCS model and
ultra-dense asymptotics

Terminal j wins a resource block when its normalised SINR Z_j/E[Z_j] beats
every other terminal's, so the joint density of winning at SINR z is

    h_j(z) = Π_{g≠j} F_g(r_g z) · f_j(z),    r_g = E[Z_g]/E[Z_j].

Expanding Π(1 - G_g) over subsets S of the other terminals turns every
product of partial-fraction tails into pole terms a/(x+z)^k · e^{-Dz}, whose
tail integrals reduce to generalized exponential integrals:

    ∫_z^∞ e^{-Dt}/(x+t)^k dt = e^{-Dz} s^{1-k} e^{Ds} E_k(Ds),   s = x + z.

Every closed-form value has an adaptive-quadrature twin, used as the
fallback when the alternating sum is ill-conditioned.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.stats import binom

from config.settings import analytic_config, frame_defaults, oracle_config, quadrature_config
from src.exceptions import (
    ComplexityError,
    DegenerateRootsError,
    DomainError,
    IllConditionedError,
    ValidationError
)
from src.models.mcs import McsTable
from src.models.partial_fractions import PoleExpansion
from src.models.population import CellPopulation
from src.models.sinr import SinrDistribution
from src.numerics import (
    CompensatedSum,
    compensated_sum,
    exp_integral_en_scaled,
    extended_sum,
    integrate_piecewise
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

CLOSED_FORM = 'closed_form'
EXTENDED = 'extended'
QUADRATURE = 'quadrature'


@dataclass(eq=False)
class AntiderivativeTerms:
    """
    Signed terms of the closed-form primitive of h_j

    Term i contributes coefficients[i]·e^{-D_i z}/(x_i + z)^{k_i} to the
    integrand; order-0 terms have no pole (poles[i] is NaN).
    """
    terminal: int
    rb: int
    coefficients: np.ndarray
    poles: np.ndarray
    orders: np.ndarray
    decays: np.ndarray
    subset_sizes: np.ndarray

    @property
    def term_count(self) -> int:
        return int(self.coefficients.size)

    def tails(self, z: float) -> np.ndarray:
        """coefficients·∫_z^∞ e^{-Dt}/(x+t)^k dt per term"""
        if math.isinf(z):
            return np.zeros_like(self.coefficients)
        out = np.empty_like(self.coefficients)
        envelope = np.exp(-self.decays * z)
        for order in np.unique(self.orders):
            mask = self.orders == order
            if order == 0:
                out[mask] = envelope[mask] / self.decays[mask]
                continue
            s = self.poles[mask] + z
            scaled = exp_integral_en_scaled(int(order), self.decays[mask] * s)
            out[mask] = envelope[mask] * s ** (1 - int(order)) * scaled
        return self.coefficients * out


@dataclass(frozen=True)
class IntervalResult:
    """Mass of h_j over one MCS interval and how it was obtained"""
    lower: float
    upper: float
    efficiency: float
    value: float
    method: str
    condition: float = 1.0


@dataclass
class TerminalRate:
    """Rate of one terminal with its per-RB interval breakdown"""
    terminal: int
    rate: float
    intervals: List[Tuple[int, List[IntervalResult]]] = field(default_factory=list)
    fallbacks: List[str] = field(default_factory=list)


@dataclass
class ThroughputResult:
    """Per-terminal rates (bit/s) of one model"""
    model: str
    rates: np.ndarray
    terminals: List[TerminalRate] = field(default_factory=list)

    @property
    def fallbacks(self) -> List[str]:
        return [note for t in self.terminals for note in t.fallbacks]


def disagrees(value: float, reference: float) -> bool:
    """True when a closed-form value misses its quadrature reference by more than the cross-check tolerance"""
    return abs(value - reference) > analytic_config.CROSS_CHECK_REL_TOL * abs(reference) + quadrature_config.ABS_TOL


def _check_index(j: int, pop: CellPopulation, rb: int):
    if not 0 <= j < pop.terminals:
        raise DomainError(f"Terminal index {j} out of range (|J|={pop.terminals})")
    if not 0 <= rb < pop.n_rb:
        raise DomainError(f"RB index {rb} out of range (N={pop.n_rb})")


def normalized_laws(j: int, pop: CellPopulation, rb: int) -> Tuple[SinrDistribution, List[SinrDistribution]]:
    """
    Terminal j's law and the laws of Z_g/r_g for every other terminal

    Args:
        j: Terminal index
        pop: Population
        rb: Resource block index

    Returns:
        (law of Z_j, [law of Z_g·E[Z_j]/E[Z_g] for g != j])
    """
    _check_index(j, pop, rb)
    laws = pop.rb_laws(rb)
    own = laws[j]
    others = [g.scaled(own.mean / g.mean) for k, g in enumerate(laws) if k != j]
    return own, others


def _tail_expansion(law: SinrDistribution) -> Tuple[PoleExpansion, float]:
    if law.is_exponential:
        return PoleExpansion.one(), law.rate
    if not law.decomposed:
        raise DegenerateRootsError("SINR law kept in product form has no closed-form primitive")
    return PoleExpansion.simple(law.c, law.u), law.c0


def _density_expansion(law: SinrDistribution) -> Tuple[PoleExpansion, float]:
    if law.is_exponential:
        return PoleExpansion(constant=law.rate), law.rate
    if not law.decomposed:
        raise DegenerateRootsError("SINR law kept in product form has no closed-form primitive")
    density = PoleExpansion()
    for c_t, u_t in zip(law.c, law.u):
        density._add(c_t, 2, u_t)
        density._add(c_t, 1, law.c0 * u_t)
    return density, law.c0


def estimate_term_count(j: int, pop: CellPopulation, rb: int = 0) -> int:
    """Upper bound on the number of primitive terms for terminal j"""
    laws = pop.rb_laws(rb)
    own_poles = 2 * len(laws[j].c) or 1
    other_poles = max((len(g.c) for k, g in enumerate(laws) if k != j), default=0)
    others = pop.terminals - 1
    return sum(math.comb(others, k) * (2 * k * other_poles + own_poles) for k in range(others + 1))


def build_antiderivative(j: int, pop: CellPopulation, rb: int = 0) -> AntiderivativeTerms:
    """
    Materialise every term of the subset expansion of h_j's primitive

    Args:
        j: Terminal index
        pop: Population
        rb: Resource block index

    Returns:
        AntiderivativeTerms

    Raises:
        ComplexityError: expansion would exceed the configured term cap
        DegenerateRootsError: a law has no partial-fraction form
    """
    estimate = estimate_term_count(j, pop, rb)
    if estimate > analytic_config.TERM_CAP:
        raise ComplexityError(estimate, analytic_config.TERM_CAP)

    own, others = normalized_laws(j, pop, rb)
    density, own_decay = _density_expansion(own)
    tails = [_tail_expansion(g) for g in others]

    coefficients, poles, orders, decays, sizes = [], [], [], [], []

    def emit(expansion: PoleExpansion, decay: float, size: int):
        sign = -1.0 if size % 2 else 1.0
        product = expansion * density
        total_decay = decay + own_decay
        if product.constant != 0.0:
            coefficients.append(sign * product.constant)
            poles.append(np.nan)
            orders.append(0)
            decays.append(total_decay)
            sizes.append(size)
        for x, k, a in product.terms():
            coefficients.append(sign * a)
            poles.append(x)
            orders.append(k)
            decays.append(total_decay)
            sizes.append(size)

    # depth-first over subsets so each product extends its parent's
    stack = [(0, PoleExpansion.one(), 0.0, 0)]
    while stack:
        start, expansion, decay, size = stack.pop()
        emit(expansion, decay, size)
        for idx in range(start, len(tails)):
            tail, tail_decay = tails[idx]
            stack.append((idx + 1, expansion * tail, decay + tail_decay, size + 1))

    terms = AntiderivativeTerms(
        terminal=j,
        rb=rb,
        coefficients=np.asarray(coefficients, dtype=float),
        poles=np.asarray(poles, dtype=float),
        orders=np.asarray(orders, dtype=int),
        decays=np.asarray(decays, dtype=float),
        subset_sizes=np.asarray(sizes, dtype=int)
    )
    logger.debug(f"Terminal {j} RB {rb}: {terms.term_count} primitive terms")
    return terms


def _accumulate(pieces: Sequence[float]) -> Tuple[CompensatedSum, str]:
    """Compensated sum with the extended-precision and ill-conditioning thresholds applied"""
    result = compensated_sum(pieces)
    magnitude = math.fsum(abs(p) for p in pieces)
    # values below the quadrature floor are indistinguishable from zero
    condition = magnitude / max(abs(result.value), quadrature_config.ABS_TOL) if magnitude else 1.0

    if condition > analytic_config.ILL_CONDITION_THRESHOLD:
        raise IllConditionedError(condition, analytic_config.ILL_CONDITION_THRESHOLD)
    if condition > analytic_config.EXTENDED_PRECISION_THRESHOLD:
        return CompensatedSum(extended_sum(pieces), condition), EXTENDED
    return CompensatedSum(result.value, condition), CLOSED_FORM


def eval_antiderivative(terms: AntiderivativeTerms, z: float) -> CompensatedSum:
    """
    Primitive of h_j normalised to 1 at infinity

    For a single terminal this is F_j(z); in general it equals
    F_j(z) + Σ_{S≠∅} (-1)^{|S|}(...), and its rise over [0, ∞) is P[S_j = 1].

    Args:
        terms: Expansion from build_antiderivative
        z: Linear SINR >= 0 (may be inf)

    Returns:
        CompensatedSum with the value and its condition estimate

    Raises:
        IllConditionedError: condition estimate above the configured threshold
    """
    if z < 0 or math.isnan(z):
        raise DomainError("SINR argument must be non-negative")
    pieces = [1.0] + (-terms.tails(z)).tolist()
    value, _ = _accumulate(pieces)
    return value


def definite_integral(terms: AntiderivativeTerms, lower: float, upper: float) -> Tuple[CompensatedSum, str]:
    """
    ∫_lower^upper h_j(z) dz from term-wise primitive differences

    Returns:
        (CompensatedSum, method) with method 'closed_form' or 'extended'
    """
    if lower < 0 or not lower <= upper:
        raise DomainError(f"Invalid interval [{lower}, {upper}]")
    if lower == upper:
        return CompensatedSum(0.0, 1.0), CLOSED_FORM
    pieces = terms.tails(lower).tolist()
    if not math.isinf(upper):
        pieces += (-terms.tails(upper)).tolist()
    return _accumulate(pieces)


def joint_density(j: int, pop: CellPopulation, rb: int = 0) -> Callable[[float], float]:
    """h_j(z) = Π_{g≠j} F_g(r_g z)·f_j(z) as a scalar callable"""
    own, others = normalized_laws(j, pop, rb)

    def h(z: float) -> float:
        value = own.pdf(z)
        for law in others:
            if value == 0.0:
                break
            value *= law.cdf(z)
        return value

    return h


def joint_scales(j: int, pop: CellPopulation, rb: int = 0) -> List[float]:
    """Breakpoints for quadrature of h_j: the scales of Z_j and of every normalised competitor"""
    own, others = normalized_laws(j, pop, rb)
    scales = set(own.scales())
    for law in others:
        scales.update(law.scales())
    return sorted(scales)


def quadrature_integral(j: int, pop: CellPopulation, rb: int, lower: float, upper: float) -> float:
    """∫_lower^upper h_j(z) dz by adaptive quadrature"""
    return integrate_piecewise(joint_density(j, pop, rb), lower, upper, joint_scales(j, pop, rb))


def scheduling_probability(j: int, pop: CellPopulation, rb: int = 0) -> float:
    """
    P[S_j = 1] = ∫_0^∞ Π_{g≠j} F_g(r_g z) f_j(z) dz by quadrature

    Args:
        j: Terminal index
        pop: Population
        rb: Resource block index

    Returns:
        Probability in (0, 1]
    """
    _check_index(j, pop, rb)
    if pop.terminals == 1:
        return 1.0
    value = quadrature_integral(j, pop, rb, 0.0, math.inf)
    return min(max(value, 0.0), 1.0)


def scheduled_sinr_pdf(j: int, pop: CellPopulation, rb: int, z: float,
                       probability: Optional[float] = None) -> float:
    """Density of Z_j given S_j = 1"""
    if z < 0:
        raise DomainError("SINR argument must be non-negative")
    if pop.terminals == 1:
        return pop.distribution(j, rb).pdf(z)
    probability = probability or scheduling_probability(j, pop, rb)
    return joint_density(j, pop, rb)(z) / probability


def scheduled_sinr_cdf(j: int, pop: CellPopulation, rb: int, z: float,
                       probability: Optional[float] = None, method: str = CLOSED_FORM,
                       terms: Optional[AntiderivativeTerms] = None) -> float:
    """
    CDF of Z_j given S_j = 1

    Args:
        j: Terminal index
        pop: Population
        rb: Resource block index
        z: Linear SINR >= 0
        probability: P[S_j = 1] if already known
        method: 'closed_form' (primitive, quadrature fallback) or 'quadrature'
        terms: Pre-built primitive terms

    Returns:
        Probability in [0, 1]
    """
    if z < 0:
        raise DomainError("SINR argument must be non-negative")
    if z == 0:
        return 0.0
    if pop.terminals == 1:
        return pop.distribution(j, rb).cdf(z)
    probability = probability or scheduling_probability(j, pop, rb)

    mass = None
    if method != QUADRATURE:
        try:
            terms = terms or build_antiderivative(j, pop, rb)
            mass = definite_integral(terms, 0.0, z)[0].value
        except (IllConditionedError, DegenerateRootsError, ComplexityError) as exc:
            logger.warning(f"Scheduled CDF of terminal {j}: {type(exc).__name__}, using quadrature")
    if mass is None:
        mass = quadrature_integral(j, pop, rb, 0.0, z)
    return min(max(mass / probability, 0.0), 1.0)


def scheduled_sinr_mean(j: int, pop: CellPopulation, rb: int = 0,
                        probability: Optional[float] = None) -> float:
    """E[Z_j | S_j = 1] by quadrature of z·h_j(z)"""
    _check_index(j, pop, rb)
    probability = probability or scheduling_probability(j, pop, rb)
    h = joint_density(j, pop, rb)
    return integrate_piecewise(lambda z: z * h(z), 0.0, math.inf, joint_scales(j, pop, rb)) / probability


def _interval_masses(j: int, pop: CellPopulation, rb: int, table: McsTable,
                     method: str, cross_check: bool, notes: List[str]) -> List[IntervalResult]:
    terms = None
    if method != QUADRATURE:
        try:
            terms = build_antiderivative(j, pop, rb)
        except (DegenerateRootsError, ComplexityError) as exc:
            notes.append(f"terminal {j} rb {rb}: {type(exc).__name__}, all intervals by quadrature")
            logger.warning(f"Terminal {j} RB {rb}: {exc}; falling back to quadrature")

    results = []
    for lower, upper, efficiency in table.intervals():
        if terms is not None:
            try:
                value, used = definite_integral(terms, lower, upper)
                if cross_check:
                    reference = quadrature_integral(j, pop, rb, lower, upper)
                    if disagrees(value.value, reference):
                        notes.append(f"terminal {j} rb {rb} [{lower:.4g}, {upper:.4g}): closed form "
                                     f"{value.value:.10g} disagrees with quadrature {reference:.10g}")
                        logger.warning(notes[-1])
                        results.append(IntervalResult(lower, upper, efficiency, reference, QUADRATURE,
                                                      value.condition))
                        continue
                results.append(IntervalResult(lower, upper, efficiency, value.value, used, value.condition))
                continue
            except IllConditionedError as exc:
                notes.append(f"terminal {j} rb {rb} [{lower:.4g}, {upper:.4g}): condition {exc.condition:.3g}")
                logger.warning(f"Terminal {j}: {exc}; interval by quadrature")
        value = quadrature_integral(j, pop, rb, lower, upper)
        results.append(IntervalResult(lower, upper, efficiency, value, QUADRATURE))
    return results


def relaxed_mcs_rate(j: int, pop: CellPopulation, table: McsTable, method: str = CLOSED_FORM,
                     cross_check: bool = False) -> TerminalRate:
    """
    Expected rate of terminal j with per-RB MCS selection

    R_j = (N_S N_C/T_TTI) Σ_n Σ_m c_m ∫_{A_m} h_j(z) dz

    Args:
        j: Terminal index
        pop: Population
        table: MCS table (its N_S, N_C are used)
        method: 'closed_form' (quadrature fallback per interval) or 'quadrature'
        cross_check: Compare every closed-form interval with quadrature

    Returns:
        TerminalRate
    """
    scale = table.payload_scale / pop.frame.t_tti
    result = TerminalRate(terminal=j, rate=0.0)
    computed = {}
    per_rb = []
    for rb in range(pop.n_rb):
        key = pop.rb_laws(rb)
        if key not in computed:
            computed[key] = _interval_masses(j, pop, rb, table, method, cross_check, result.fallbacks)
        intervals = computed[key]
        result.intervals.append((rb, intervals))
        per_rb.append(sum(r.efficiency * r.value for r in intervals))
    result.rate = scale * math.fsum(per_rb)
    return result


def _map_terminals(fn: Callable[[int], TerminalRate], count: int, threads: Optional[int]) -> List[TerminalRate]:
    workers = max(1, min(threads or oracle_config.THREADS, count))
    if workers == 1:
        return [fn(j) for j in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def relaxed_mcs_throughput(pop: CellPopulation, table: McsTable, method: str = CLOSED_FORM,
                           cross_check: bool = False, threads: Optional[int] = None) -> ThroughputResult:
    """
    Per-terminal relaxed-MCS rates (bit/s)

    Args:
        pop: Population
        table: MCS table
        method: 'closed_form' or 'quadrature'
        cross_check: Verify every closed-form interval against quadrature
        threads: Worker threads (default from PFS_ORACLE_THREADS)

    Returns:
        ThroughputResult with per-interval details and fallback notes
    """
    logger.info(f"Relaxed-MCS model for {pop.terminals} terminals on {pop.n_rb} RBs")
    terminals = _map_terminals(lambda j: relaxed_mcs_rate(j, pop, table, method, cross_check),
                               pop.terminals, threads)
    result = ThroughputResult('exact_relaxed', np.array([t.rate for t in terminals]), terminals)
    if result.fallbacks:
        logger.warning(f"{len(result.fallbacks)} closed-form fallbacks to quadrature")
    return result


def _survival_powers(cdf: np.ndarray, n: int) -> np.ndarray:
    """(1 - F)^n at each edge, formed through log1p so small F keep their digits"""
    cdf = np.clip(np.asarray(cdf, dtype=float), 0.0, 1.0)
    with np.errstate(divide='ignore'):
        return np.exp(n * np.log1p(-cdf))


def expansion_mass(lower_cdf: float, upper_cdf: float, n: int, exponent: int = 1) -> CompensatedSum:
    """
    Σ_{k<n} C(n-1,k)(-1)^k n/(k+1)·[F^{e(k+1)}] between two interval edges

    The sum equals (1 - F_lo^e)^n - (1 - F_hi^e)^n, but its terms grow like 2^n.
    Past the extended-precision threshold it is rebuilt in mpmath from the
    exact edge values with enough digits to absorb the cancellation.

    Args:
        lower_cdf: F at the lower edge
        upper_cdf: F at the upper edge
        n: Number of co-scheduled RBs
        exponent: e, the power F is raised to (|J| in the exponential limit)

    Returns:
        CompensatedSum with the mass and its condition estimate
    """
    if n < 1:
        raise DomainError("Need n >= 1")
    coefficients = [math.comb(n - 1, k) * (-1) ** k * n for k in range(n)]
    try:
        pieces = []
        for k, coef in enumerate(coefficients):
            weight = coef / (k + 1)
            pieces.append(weight * upper_cdf ** (exponent * (k + 1)))
            pieces.append(-weight * lower_cdf ** (exponent * (k + 1)))
        result = compensated_sum(pieces)
        magnitude = math.fsum(abs(p) for p in pieces)
        if not magnitude:
            return CompensatedSum(0.0, 1.0)
        condition = magnitude / max(abs(result.value), quadrature_config.ABS_TOL)
        if condition <= analytic_config.EXTENDED_PRECISION_THRESHOLD:
            return CompensatedSum(result.value, condition)
    except OverflowError:
        magnitude = math.inf

    # largest term is below n·2^(n-1)
    digits = math.ceil((n + math.log2(2 * n)) * math.log10(2.0) - math.log10(quadrature_config.ABS_TOL))
    with mpmath.workdps(analytic_config.EXTENDED_PRECISION_DPS + digits):
        upper, lower = mpmath.mpf(upper_cdf), mpmath.mpf(lower_cdf)
        total = mpmath.fsum(
            mpmath.mpf(coef) / (k + 1) * (upper ** (exponent * (k + 1)) - lower ** (exponent * (k + 1)))
            for k, coef in enumerate(coefficients)
        )
        value = float(total)
    condition = magnitude / max(abs(value), quadrature_config.ABS_TOL)
    logger.debug(f"Binomial expansion with n={n} rebuilt in extended precision (condition {condition:.3g})")
    return CompensatedSum(value, condition)


def _min_statistic_masses(survival: np.ndarray, n: int, method: str) -> np.ndarray:
    """
    P(min of n scheduled SINRs in each interval) from the scheduled survival at the edges

    'binomial' uses the expansion Σ_k C(n-1,k)(-1)^k n/(k+1)·[F^{k+1}];
    otherwise (1-F)^n differences.
    """
    if method == 'binomial':
        cdf = 1.0 - survival
        return np.array([expansion_mass(cdf[m], cdf[m + 1], n).value for m in range(len(survival) - 1)])
    powered = survival ** n
    return powered[:-1] - powered[1:]


def unique_mcs_rate(j: int, pop: CellPopulation, table: McsTable, method: str = QUADRATURE) -> TerminalRate:
    """
    Expected rate of terminal j when all its co-scheduled RBs share the MCS of the weakest

    R_j = (N_S N_C/T_TTI) Σ_n n·C(N,n) P^n (1-P)^{N-n} Σ_m c_m P(min_n ∈ A_m)

    Args:
        j: Terminal index
        pop: Homogeneous population (one law per terminal on all RBs)
        table: MCS table
        method: 'quadrature' evaluates the scheduled CDF by quadrature;
            'binomial' uses the closed-form primitive and the binomial expansion

    Returns:
        TerminalRate

    Raises:
        ValidationError: population is not homogeneous across RBs
    """
    if method not in (QUADRATURE, 'binomial'):
        raise ValidationError(f"Unknown unique-MCS method '{method}'", field="method")
    if not pop.is_homogeneous():
        raise ValidationError("Unique-MCS model needs homogeneous per-RB laws", field="population")

    probability = scheduling_probability(j, pop, 0)
    edges = table.interval_edges()
    cdf_method = QUADRATURE if method == QUADRATURE else CLOSED_FORM
    terms = None
    if cdf_method == CLOSED_FORM and pop.terminals > 1:
        try:
            terms = build_antiderivative(j, pop, 0)
        except (DegenerateRootsError, ComplexityError) as exc:
            logger.warning(f"Terminal {j}: {exc}; scheduled CDF by quadrature")
            cdf_method = QUADRATURE
    survival = np.array([
        0.0 if math.isinf(z) else
        1.0 - scheduled_sinr_cdf(j, pop, 0, z, probability, cdf_method, terms)
        for z in edges
    ])

    efficiencies = np.asarray(table.efficiencies)
    n_rb = pop.n_rb
    payload = []
    for n in range(1, n_rb + 1):
        weight = binom.pmf(n, n_rb, probability)
        if weight == 0.0:
            continue
        masses = _min_statistic_masses(survival, n, method)
        payload.append(n * weight * float(efficiencies @ masses))

    rate = table.payload_scale / pop.frame.t_tti * math.fsum(payload)
    return TerminalRate(terminal=j, rate=rate)


def unique_mcs_throughput(pop: CellPopulation, table: McsTable, method: str = QUADRATURE,
                          threads: Optional[int] = None) -> ThroughputResult:
    """Per-terminal unique-MCS rates (bit/s); see unique_mcs_rate"""
    logger.info(f"Unique-MCS model for {pop.terminals} terminals on {pop.n_rb} RBs ({method})")
    terminals = _map_terminals(lambda j: unique_mcs_rate(j, pop, table, method), pop.terminals, threads)
    return ThroughputResult('exact_unique', np.array([t.rate for t in terminals]), terminals)


def _dense_cdf(z: np.ndarray, mean: float) -> np.ndarray:
    return -np.expm1(-np.asarray(z, dtype=float) / mean)


def _check_dense(mean: float, terminals: int, n_rb: int):
    if not (np.isfinite(mean) and mean > 0):
        raise DomainError("Mean SINR must be positive and finite")
    if terminals < 1 or n_rb < 1:
        raise DomainError("Need |J| >= 1 and N >= 1")


def ultra_dense_relaxed_throughput(mean_sinrs: Sequence[float], terminals: Optional[int], n_rb: int,
                                   table: McsTable, t_tti: float = frame_defaults.T_TTI) -> np.ndarray:
    """
    Relaxed-MCS rates in the exponential limit

    R_j = (N_S N_C/(|J| T_TTI)) Σ_n Σ_m c_m (F^{|J|}(z_{m+1}) - F^{|J|}(z_m))

    Args:
        mean_sinrs: E[Z_j] per terminal
        terminals: |J| (default: number of means)
        n_rb: N
        table: MCS table
        t_tti: Slot duration in seconds

    Returns:
        Rates (bit/s); each depends only on its own mean and |J|
    """
    means = np.atleast_1d(np.asarray(mean_sinrs, dtype=float))
    terminals = terminals or len(means)
    edges = np.asarray(table.interval_edges())
    efficiencies = np.asarray(table.efficiencies)
    scale = table.payload_scale / (terminals * t_tti) * n_rb

    rates = np.empty(len(means))
    for idx, mean in enumerate(means):
        _check_dense(mean, terminals, n_rb)
        powered = _dense_cdf(edges, mean) ** terminals
        rates[idx] = scale * float(efficiencies @ np.diff(powered))
    return rates


def ultra_dense_unique_mcs_throughput(mean_sinr: float, terminals: int, n_rb: int, table: McsTable,
                                      t_tti: float = frame_defaults.T_TTI, cross_check: bool = False) -> float:
    """
    Unique-MCS rate in the exponential limit (P = 1/|J|, scheduled CDF F^{|J|})

    R = (N_S N_C/T_TTI) Σ_n n·C(N,n)(1/|J|)^n(1-1/|J|)^{N-n}
            Σ_m c_m Σ_{k=0}^{n-1} C(n-1,k)(-1)^k n/(k+1)·[F^{|J|(k+1)}]_{A_m}

    The inner k-sum is evaluated as (1-F^{|J|})^n differences; with
    cross_check the expansion itself is formed and compared.

    Returns:
        Rate in bit/s
    """
    _check_dense(mean_sinr, terminals, n_rb)
    cdf = _dense_cdf(np.asarray(table.interval_edges()), mean_sinr)
    scheduled_cdf = cdf ** terminals
    efficiencies = np.asarray(table.efficiencies)
    probability = 1.0 / terminals

    payload = []
    for n in range(1, n_rb + 1):
        weight = binom.pmf(n, n_rb, probability)
        if weight == 0.0:
            continue
        powered = _survival_powers(scheduled_cdf, n)
        masses = powered[:-1] - powered[1:]
        if cross_check:
            for m, mass in enumerate(masses):
                expanded = expansion_mass(cdf[m], cdf[m + 1], n, terminals).value
                if disagrees(expanded, mass):
                    logger.warning(f"Dense unique-MCS n={n} interval {m}: expansion {expanded:.10g} "
                                   f"vs survival form {mass:.10g}")
        payload.append(n * weight * float(efficiencies @ masses))
    return table.payload_scale / t_tti * math.fsum(payload)


def pfs_sinr_gain(terminals: int) -> float:
    """
    Scheduled-to-unconditional mean SINR ratio of PFS among |J| exponential terminals

    G(J) = Σ_{k=0}^{J-1} C(J-1,k)(-1)^k J/(k+1)^2, which equals the harmonic number H_J.
    The alternating sum is formed in extended precision.
    """
    if terminals < 1:
        raise DomainError("Need |J| >= 1")
    with mpmath.workdps(analytic_config.EXTENDED_PRECISION_DPS + terminals):
        total = mpmath.fsum(
            mpmath.mpf(math.comb(terminals - 1, k) * (-1) ** k * terminals) / (k + 1) ** 2
            for k in range(terminals)
        )
        return float(total)


def scheduled_mean_dense(p0: float, eta: float, n0: float, terminals: int) -> float:
    """E[Z | S = 1] = p0/(n0 + eta)·G(|J|) for exponential terminals with interference eta"""
    if not (p0 > 0 and eta >= 0 and n0 >= 0 and n0 + eta > 0):
        raise DomainError("Need p0 > 0 and n0 + eta > 0")
    return p0 / (n0 + eta) * pfs_sinr_gain(terminals)
