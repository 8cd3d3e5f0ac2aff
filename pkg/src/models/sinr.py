"""
SINR law of a Rayleigh-faded link under Rayleigh-faded interferers

With c_i = p0/p_i and c0 = N0/p0 the SINR Z = X0/(Σ X_i/c_i + c0) of unit-mean
exponentials has

    1 - F(z) = Π_i c_i/(c_i + z) · e^{-z c0} = Σ_i U_i/(c_i + z) · e^{-z c0}

for pairwise distinct c_i, with residues U_i = c_i Π_{f≠i} c_f/(c_f - c_i).
A link without interferers, and the equal-split limit of many interferers,
is exponential with rate λ.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import analytic_config
from src.exceptions import DegenerateRootsError, DomainError, InfiniteMeanError, ValidationError
from src.numerics import compensated_sum, exp_integral_e1_scaled, integrate_piecewise
from src.utils.logger import get_logger

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# fixed seed keeps build_distribution deterministic
_IDENTITY_CHECK_SEED = 20240611
# largest |expansion - product| accepted when checking the decomposition
IDENTITY_TOLERANCE = 1e-8


class DistributionForm(str, Enum):
    EXACT = 'exact'
    EXPONENTIAL = 'exponential_limit'


@dataclass(frozen=True)
class LinkProfile:
    """Average received powers (linear W) of one terminal on one resource block"""
    p0: float
    interferer_powers: Tuple[float, ...] = ()
    n0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'interferer_powers', tuple(float(p) for p in self.interferer_powers))
        if not (np.isfinite(self.p0) and self.p0 > 0):
            raise DomainError(f"Signal power must be positive, got {self.p0}")
        if not (np.isfinite(self.n0) and self.n0 >= 0):
            raise DomainError(f"Noise power must be non-negative, got {self.n0}")
        if any(not (np.isfinite(p) and p > 0) for p in self.interferer_powers):
            raise DomainError("Interferer powers must be positive")
        if not self.interferer_powers and self.n0 == 0:
            raise DomainError("A link without interferers needs positive noise power")

    @property
    def total_interference(self) -> float:
        """Accumulated average interfering power P"""
        return float(sum(self.interferer_powers))

    @property
    def ian_sinr(self) -> float:
        """Average-power SINR p0/(P + N0)"""
        return self.p0 / (self.total_interference + self.n0)

    def equal_split(self, count: int) -> 'LinkProfile':
        """Same total interference spread over count equal interferers"""
        if count < 1:
            raise DomainError("Interferer count must be >= 1")
        total = self.total_interference
        if total <= 0:
            raise DomainError("Link has no interference to split")
        return LinkProfile(self.p0, (total / count,) * count, self.n0)

    def scaled(self, factor: float) -> 'LinkProfile':
        """All powers multiplied by a common factor (SINR law unchanged)"""
        return LinkProfile(self.p0 * factor, tuple(p * factor for p in self.interferer_powers), self.n0 * factor)


@dataclass(frozen=True)
class SinrDistribution:
    """
    Partial-fraction representation of a terminal's SINR law

    For the exact form, decay is c0 and the tail is Σ u_i/(c_i+z)·e^{-z c0}.
    For the exponential form the tail is e^{-λ z} and c, u are empty.
    """
    form: DistributionForm
    c: Tuple[float, ...]
    c0: float
    u: Tuple[float, ...]
    mean: float
    rate: Optional[float] = None
    perturbed: bool = False
    decomposed: bool = True
    original_c: Tuple[float, ...] = field(default=(), compare=False)

    @property
    def is_exponential(self) -> bool:
        return self.form == DistributionForm.EXPONENTIAL

    @property
    def decay(self) -> float:
        """Exponent of the e^{-z·decay} tail factor"""
        return self.rate if self.is_exponential else self.c0

    @property
    def interferers(self) -> int:
        return len(self.c)

    def cdf(self, z: ArrayLike) -> ArrayLike:
        return cdf(self, z)

    def ccdf(self, z: ArrayLike) -> ArrayLike:
        return ccdf(self, z)

    def pdf(self, z: ArrayLike) -> ArrayLike:
        return pdf(self, z)

    def cdf_product(self, z: ArrayLike) -> ArrayLike:
        return cdf_product(self, z)

    def scaled(self, factor: float) -> 'SinrDistribution':
        """
        Law of factor·Z

        Args:
            factor: Positive scale

        Returns:
            SinrDistribution with c and u scaled by factor, c0 and λ divided
        """
        if not (np.isfinite(factor) and factor > 0):
            raise DomainError("Scale factor must be positive")
        return SinrDistribution(
            form=self.form,
            c=tuple(ci * factor for ci in self.c),
            c0=self.c0 / factor,
            u=tuple(ui * factor for ui in self.u),
            mean=self.mean * factor,
            rate=None if self.rate is None else self.rate / factor,
            perturbed=self.perturbed,
            decomposed=self.decomposed,
            original_c=tuple(ci * factor for ci in self.original_c)
        )

    def sample(self, rng: np.random.Generator, size=None) -> ArrayLike:
        """Draw SINR variates from the underlying fading model"""
        if self.is_exponential:
            return rng.exponential(1.0 / self.rate, size)
        signal = rng.standard_exponential(size)
        shape = () if size is None else ((size,) if np.isscalar(size) else tuple(size))
        inv_c = 1.0 / np.asarray(self.c)
        interference = rng.standard_exponential(shape + (len(self.c),)) @ inv_c
        return signal / (interference + self.c0)

    def scales(self) -> Tuple[float, ...]:
        """SINR values where the law changes shape: the poles c_i, the decay length and the mean"""
        values = list(self.c)
        if self.decay and self.decay > 0:
            values.append(1.0 / self.decay)
        if np.isfinite(self.mean):
            values.append(self.mean)
        return tuple(sorted(v for v in values if v > 0))

    def sup_distance(self, other: 'SinrDistribution', grid: Optional[np.ndarray] = None) -> float:
        """max |F_self - F_other| over a grid (default spans 1e-4..1e2 times the mean)"""
        if grid is None:
            reference = self.mean if np.isfinite(self.mean) else other.mean
            grid = reference * np.concatenate(([0.0], np.geomspace(1e-4, 1e2, 4000)))
        return float(np.max(np.abs(cdf(self, grid) - cdf(other, grid))))


def _check_z(z: np.ndarray) -> None:
    if np.any(np.isnan(z)) or np.any(z < 0):
        raise DomainError("SINR argument must be non-negative")


def _residues(c: np.ndarray) -> np.ndarray:
    """U_i = c_i Π_{f≠i} c_f/(c_f - c_i), ratios formed pairwise to avoid overflow"""
    count = len(c)
    if count == 1:
        return c.copy()
    u = np.empty(count)
    for i in range(count):
        others = np.delete(c, i)
        u[i] = c[i] * np.prod(others / (others - c[i]))
    return u


def _separate_roots(c: np.ndarray, tol: float, perturbation: float) -> Tuple[np.ndarray, bool]:
    """Spread clusters of near-coincident c_i multiplicatively by ±perturbation"""
    order = np.argsort(c, kind='stable')
    sorted_c = c[order]
    scale = sorted_c[-1]
    separated = sorted_c.copy()
    perturbed = False

    start = 0
    while start < len(sorted_c):
        stop = start + 1
        while stop < len(sorted_c) and sorted_c[stop] - sorted_c[stop - 1] < tol * scale:
            stop += 1
        size = stop - start
        if size > 1:
            perturbed = True
            offsets = 2.0 * np.arange(size) - (size - 1)
            separated[start:stop] = sorted_c[start:stop] * (1.0 + perturbation * offsets)
        start = stop

    result = np.empty_like(c)
    result[order] = separated
    return result, perturbed


def _verify_identity(c: np.ndarray, u: np.ndarray, points: int) -> None:
    rng = np.random.default_rng(_IDENTITY_CHECK_SEED)
    z = np.exp(rng.uniform(np.log(1e-3 * c.min()), np.log(1e3 * c.max()), points))
    expansion = np.sum(u[:, None] / (c[:, None] + z[None, :]), axis=0)
    product = np.prod(c[:, None] / (c[:, None] + z[None, :]), axis=0)
    deviation = float(np.max(np.abs(expansion - product)))
    if not deviation <= IDENTITY_TOLERANCE:
        raise DegenerateRootsError(
            f"Partial-fraction weights fail the product identity (max deviation {deviation:.3g}); "
            f"roots {c.tolist()} are too close to separate"
        )


def _exact_mean(c: np.ndarray, u: np.ndarray, c0: float) -> float:
    return compensated_sum(u * exp_integral_e1_scaled(c * c0)).value


def _product_mean(c: np.ndarray, c0: float) -> float:
    """∫(1 - F) by quadrature, for laws kept in product form"""
    tail = lambda z: float(np.prod(c / (c + z)) * np.exp(-c0 * z))
    return integrate_piecewise(tail, 0.0, np.inf, list(c) + [1.0 / c0])


def build_distribution(link: LinkProfile, on_degenerate: str = 'raise') -> SinrDistribution:
    """
    Build the SINR law of a link

    Args:
        link: Average received powers
        on_degenerate: 'raise' or 'product'; with 'product' roots that cannot be
            separated leave the law in product form (decomposed=False), which
            evaluates exactly but has no closed-form antiderivative

    Returns:
        Exponential form (rate N0/p0) without interferers, exact form otherwise

    Raises:
        DegenerateRootsError: roots cannot be separated into a valid decomposition
    """
    if on_degenerate not in ('raise', 'product'):
        raise ValidationError(f"Unknown on_degenerate mode '{on_degenerate}'", field="on_degenerate")

    c0 = link.n0 / link.p0
    if not link.interferer_powers:
        return SinrDistribution(
            form=DistributionForm.EXPONENTIAL, c=(), c0=c0, u=(), mean=1.0 / c0, rate=c0
        )

    original = link.p0 / np.asarray(link.interferer_powers)
    try:
        c, perturbed = _separate_roots(
            original, analytic_config.ROOT_SEPARATION_TOL, analytic_config.ROOT_PERTURBATION
        )
        if perturbed:
            logger.warning(
                f"Near-coincident interferer powers; roots perturbed by ±{analytic_config.ROOT_PERTURBATION:g}"
            )
            if np.any(np.diff(np.sort(c)) < analytic_config.ROOT_SEPARATION_TOL * c.max()):
                raise DegenerateRootsError(f"Roots {original.tolist()} remain coincident after perturbation")

        u = _residues(c)
        if len(c) > 1:
            _verify_identity(c, u, analytic_config.ORACLE_CHECK_POINTS)
    except DegenerateRootsError:
        if on_degenerate == 'raise':
            raise
        logger.debug(f"Keeping {len(original)}-interferer law in product form")
        return SinrDistribution(
            form=DistributionForm.EXACT,
            c=tuple(original.tolist()),
            c0=c0,
            u=(),
            mean=_product_mean(original, c0) if c0 > 0 else np.inf,
            decomposed=False,
            original_c=tuple(original.tolist())
        )

    return SinrDistribution(
        form=DistributionForm.EXACT,
        c=tuple(c.tolist()),
        c0=c0,
        u=tuple(u.tolist()),
        mean=_exact_mean(c, u, c0) if c0 > 0 else np.inf,
        perturbed=perturbed,
        original_c=tuple(original.tolist())
    )


def from_parameters(c: Sequence[float], c0: float, on_degenerate: str = 'raise') -> SinrDistribution:
    """Exact-form law straight from (c_i, c0), e.g. from normalised test instances"""
    if len(c) == 0:
        raise ValidationError("At least one c_i is required", field="c")
    return build_distribution(LinkProfile(1.0, tuple(1.0 / ci for ci in c), c0), on_degenerate)


def _broadcast(values: Sequence[float], arr: np.ndarray) -> np.ndarray:
    return np.asarray(values).reshape((-1,) + (1,) * arr.ndim)


def _product_tail(dist: SinrDistribution, arr: np.ndarray) -> np.ndarray:
    c = _broadcast(dist.c, arr)
    return np.prod(c / (c + arr), axis=0) * np.exp(-dist.c0 * arr)


def ccdf(dist: SinrDistribution, z: ArrayLike) -> ArrayLike:
    """P(Z > z)"""
    arr = np.asarray(z, dtype=float)
    _check_z(arr)
    if dist.is_exponential:
        result = np.exp(-dist.rate * arr)
    elif not dist.decomposed:
        result = _product_tail(dist, arr)
    else:
        c = _broadcast(dist.c, arr)
        u = _broadcast(dist.u, arr)
        # e^{-z c0} applied once outside the sum
        result = np.sum(u / (c + arr), axis=0) * np.exp(-dist.c0 * arr)
    result = np.clip(result, 0.0, 1.0)
    return float(result) if np.ndim(z) == 0 else result


def cdf(dist: SinrDistribution, z: ArrayLike) -> ArrayLike:
    """
    F(z) from the partial-fraction form

    Args:
        dist: SINR law
        z: Linear SINR >= 0

    Returns:
        Probability in [0, 1]
    """
    return 1.0 - ccdf(dist, z)


def cdf_product(dist: SinrDistribution, z: ArrayLike) -> ArrayLike:
    """F(z) = 1 - Π_i (1 + z/c_i)^{-1} e^{-z c0}"""
    arr = np.asarray(z, dtype=float)
    _check_z(arr)
    if dist.is_exponential:
        result = -np.expm1(-dist.rate * arr)
    else:
        result = 1.0 - _product_tail(dist, arr)
    result = np.clip(result, 0.0, 1.0)
    return float(result) if np.ndim(z) == 0 else result


def pdf(dist: SinrDistribution, z: ArrayLike) -> ArrayLike:
    """f(z) = e^{-z c0} Σ U [1/(c+z)^2 + c0/(c+z)]"""
    arr = np.asarray(z, dtype=float)
    _check_z(arr)
    if dist.is_exponential:
        result = dist.rate * np.exp(-dist.rate * arr)
    elif not dist.decomposed:
        # -d/dz of the product tail
        c = _broadcast(dist.c, arr)
        result = _product_tail(dist, arr) * (np.sum(1.0 / (c + arr), axis=0) + dist.c0)
    else:
        c = _broadcast(dist.c, arr)
        u = _broadcast(dist.u, arr)
        inv = 1.0 / (c + arr)
        result = np.sum(u * inv * (inv + dist.c0), axis=0) * np.exp(-dist.c0 * arr)
        result = np.maximum(result, 0.0)
    return float(result) if np.ndim(z) == 0 else result


def mean_sinr(dist: SinrDistribution) -> float:
    """
    E[Z] = Σ_i U_i e^{c_i c0} E1(c_i c0), or 1/λ for the exponential form

    Raises:
        InfiniteMeanError: interferers present but no noise
    """
    if dist.is_exponential:
        return 1.0 / dist.rate
    if dist.c0 <= 0:
        raise InfiniteMeanError("E[Z] is infinite without noise power")
    if not dist.decomposed:
        return _product_mean(np.asarray(dist.c), dist.c0)
    return _exact_mean(np.asarray(dist.c), np.asarray(dist.u), dist.c0)


def asymptotic_distribution(p0: float, total_interference: float, n0: float) -> SinrDistribution:
    """
    Exponential limit of the SINR law as interference is split over ever more stations

    Args:
        p0: Average signal power
        total_interference: Accumulated interfering power P >= 0
        n0: Noise power > 0

    Returns:
        Exponential form with λ = (n0 + P)/p0
    """
    if not (p0 > 0 and total_interference >= 0 and n0 > 0):
        raise DomainError("Need p0 > 0, P >= 0 and n0 > 0")
    rate = (n0 + total_interference) / p0
    return SinrDistribution(
        form=DistributionForm.EXPONENTIAL, c=(), c0=n0 / p0, u=(), mean=1.0 / rate, rate=rate
    )


def exponential_distribution(mean: float) -> SinrDistribution:
    """Exponential SINR law with the given mean (interference treated as noise)"""
    if not (np.isfinite(mean) and mean > 0):
        raise DomainError("Mean SINR must be positive and finite")
    return SinrDistribution(
        form=DistributionForm.EXPONENTIAL, c=(), c0=1.0 / mean, u=(), mean=mean, rate=1.0 / mean
    )
