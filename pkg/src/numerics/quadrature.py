"""
Adaptive quadrature - the independent oracle for every closed form
"""
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional

from scipy import integrate as sp_integrate

from config.settings import quadrature_config
from src.exceptions import ConvergenceError, DomainError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

TAIL_TRANSFORMS = ('exp_substitution', 'rational_substitution', 'truncate_at')

# widest ratio between neighbouring breakpoints in integrate_piecewise
_MAX_SEGMENT_RATIO = 10.0

# quad's ier codes that mean the estimate cannot be trusted
_HARD_FAILURES = {1: "maximum number of subdivisions reached",
                  3: "extremely bad integrand behavior",
                  4: "roundoff prevents convergence",
                  5: "integral is probably divergent"}


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and tail handling for integrate()"""
    abs_tol: float = quadrature_config.ABS_TOL
    rel_tol: float = quadrature_config.REL_TOL
    max_subdivisions: int = quadrature_config.MAX_SUBDIVISIONS
    infinite_tail_transform: str = quadrature_config.TAIL_TRANSFORM

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValidationError("Quadrature tolerances must be positive", field="abs_tol/rel_tol")
        if self.max_subdivisions < 1:
            raise ValidationError("max_subdivisions must be >= 1", field="max_subdivisions")
        if self.infinite_tail_transform not in TAIL_TRANSFORMS:
            raise ValidationError(
                f"Unknown tail transform '{self.infinite_tail_transform}'",
                field="infinite_tail_transform"
            )


DEFAULT_QUADRATURE = QuadratureConfig()


def _quad(f: Callable[[float], float], a: float, b: float, cfg: QuadratureConfig) -> float:
    result = sp_integrate.quad(
        f, a, b,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        full_output=1
    )
    value, error_bound = float(result[0]), float(result[1])

    if len(result) > 3:
        ier = result[2].get('ier', None) if isinstance(result[2], dict) else None
        message = str(result[3])
        # roundoff (ier=2) at a tolerance below what doubles can deliver is benign
        # as long as the error bound is close to the request
        tolerance = max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if ier == 2 and error_bound <= 1e3 * tolerance:
            logger.debug(f"quad roundoff on [{a}, {b}], accepted (err={error_bound:.2e})")
            return value
        reason = _HARD_FAILURES.get(ier, message)
        raise ConvergenceError(f"Quadrature failed on [{a}, {b}]: {reason}", value, error_bound)

    return value


def integrate(f: Callable[[float], float], a: float, b: float,
              cfg: Optional[QuadratureConfig] = None, scale: float = 1.0,
              transform: Optional[str] = None) -> float:
    """
    Adaptive estimate of ∫_a^b f(z) dz

    Args:
        f: Integrand, finite on (a, b)
        a: Lower limit
        b: Upper limit, may be math.inf
        cfg: Tolerances and tail transform (defaults from settings)
        scale: Decay length of f on an infinite tail; the substitution
               z = a - scale·ln(u) flattens integrands decaying like e^{-z/scale}
        transform: Overrides cfg.infinite_tail_transform; 'rational_substitution'
            maps z = a + scale·u/(1-u) and suits polynomially decaying tails

    Returns:
        Integral estimate

    Raises:
        DomainError: a >= b or non-finite lower limit
        ConvergenceError: subdivisions exhausted, carries estimate and bound
    """
    cfg = cfg or DEFAULT_QUADRATURE

    if not math.isfinite(a):
        raise DomainError("Lower limit must be finite")
    if not a < b:
        if a == b:
            return 0.0
        raise DomainError(f"Integration limits out of order: a={a}, b={b}")
    if not scale > 0:
        raise DomainError("Tail scale must be positive")

    if math.isfinite(b):
        return _quad(f, a, b, cfg)

    transform = transform or cfg.infinite_tail_transform
    if transform not in TAIL_TRANSFORMS:
        raise ValidationError(f"Unknown tail transform '{transform}'", field="transform")

    if transform == 'rational_substitution':
        def rational(u: float) -> float:
            if u >= 1.0:
                return 0.0
            gap = 1.0 - u
            return f(a + scale * u / gap) * scale / (gap * gap)

        return _quad(rational, 0.0, 1.0, cfg)

    if transform == 'exp_substitution':
        def transformed(u: float) -> float:
            if u <= 0.0:
                return 0.0
            return f(a - scale * math.log(u)) * scale / u

        return _quad(transformed, 0.0, 1.0, cfg)

    # truncate where the envelope e^{-(z-a)/scale} drops below abs_tol/10
    upper = a + scale * math.log(10.0 / cfg.abs_tol)
    return _quad(f, a, upper, cfg)


def _fill_geometric(points: Iterable[float], ratio: float = _MAX_SEGMENT_RATIO) -> List[float]:
    """Insert log-spaced nodes so neighbouring positive points differ by at most ratio"""
    filled = []
    for p in sorted(points):
        if filled and filled[-1] > 0:
            gaps = math.ceil(math.log(p / filled[-1]) / math.log(ratio)) - 1
            if gaps > 0:
                filled.extend(filled[-1] * (p / filled[-1]) ** (k / (gaps + 1)) for k in range(1, gaps + 1))
        filled.append(p)
    return filled


def integrate_piecewise(f: Callable[[float], float], a: float, b: float, breakpoints: Iterable[float],
                        cfg: Optional[QuadratureConfig] = None) -> float:
    """
    ∫_a^b f(z) dz split at the integrand's natural scales

    Laws built from a few strong interferers decay polynomially between their
    poles and only exponentially beyond 1/c0, which can lie decades past the
    mean. Each scale becomes a node, gaps wider than a decade are filled
    geometrically, and an infinite tail beyond the last node is mapped with
    the rational substitution scaled by that node.

    Args:
        f: Integrand
        a: Lower limit (finite)
        b: Upper limit, may be math.inf
        breakpoints: Characteristic scales; points outside (a, b) are ignored
        cfg: Tolerances

    Returns:
        Integral estimate

    Raises:
        ConvergenceError: a segment did not converge
    """
    cfg = cfg or DEFAULT_QUADRATURE
    if not math.isfinite(a):
        raise DomainError("Lower limit must be finite")
    if not a < b:
        if a == b:
            return 0.0
        raise DomainError(f"Integration limits out of order: a={a}, b={b}")

    inner = {float(p) for p in breakpoints if math.isfinite(p) and a < p < b}
    nodes = _fill_geometric(inner | {a} | ({b} if math.isfinite(b) else set()))

    parts = [_quad(f, lo, hi, cfg) for lo, hi in zip(nodes[:-1], nodes[1:]) if lo < hi]
    if math.isinf(b):
        last = nodes[-1]
        scale = last if last > 0 else 1.0
        parts.append(integrate(f, last, math.inf, cfg, scale=scale, transform='rational_substitution'))
    return math.fsum(parts)
