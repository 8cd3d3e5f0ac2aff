"""
Proper rational functions in partial-fraction form

    R(z) = constant + Σ_x Σ_{k>=1} a_{x,k} / (x + z)^k

Products stay in this form: two pole terms at distinct poles x, y split as

    1/((z+x)^m (z+y)^n) = Σ_{k=1}^{m} (-1)^{m-k} C(m+n-k-1, m-k) d^{k-m-n} / (z+x)^k
                        + Σ_{k=1}^{n} (-1)^{n-k} C(m+n-k-1, n-k) (-d)^{k-m-n} / (z+y)^k

with d = y - x, while terms at a shared pole simply add their orders.
"""
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import analytic_config


class PoleExpansion:
    """
    Partial-fraction expansion; poles closer than the relative merge
    tolerance are treated as one pole.
    """

    __slots__ = ('constant', 'poles', 'merge_tol')

    def __init__(self, constant: float = 0.0, poles: Optional[Dict[float, List[float]]] = None,
                 merge_tol: Optional[float] = None):
        self.constant = float(constant)
        self.poles: Dict[float, List[float]] = poles or {}
        self.merge_tol = analytic_config.ROOT_SEPARATION_TOL if merge_tol is None else merge_tol

    @classmethod
    def one(cls) -> 'PoleExpansion':
        return cls(constant=1.0)

    @classmethod
    def simple(cls, poles: Sequence[float], weights: Sequence[float]) -> 'PoleExpansion':
        """Σ w_i/(x_i + z) with first-order poles"""
        expansion = cls()
        for x, w in zip(poles, weights):
            expansion._add(float(x), 1, float(w))
        return expansion

    def _match(self, x: float) -> float:
        for key in self.poles:
            if abs(key - x) <= self.merge_tol * max(abs(key), abs(x)):
                return key
        return x

    def _add(self, x: float, order: int, coef: float):
        key = self._match(x)
        coefs = self.poles.setdefault(key, [])
        if len(coefs) < order:
            coefs.extend([0.0] * (order - len(coefs)))
        coefs[order - 1] += coef

    def terms(self) -> Iterator[Tuple[float, int, float]]:
        """(pole, order, coefficient) for every non-zero pole term"""
        for x, coefs in self.poles.items():
            for k, a in enumerate(coefs, start=1):
                if a != 0.0:
                    yield x, k, a

    @property
    def term_count(self) -> int:
        return sum(1 for _ in self.terms()) + (1 if self.constant != 0.0 else 0)

    @property
    def max_order(self) -> int:
        return max((len(c) for c in self.poles.values()), default=0)

    def __mul__(self, other: 'PoleExpansion') -> 'PoleExpansion':
        product = PoleExpansion(self.constant * other.constant, merge_tol=self.merge_tol)

        if self.constant != 0.0:
            for x, k, a in other.terms():
                product._add(x, k, self.constant * a)
        if other.constant != 0.0:
            for x, k, a in self.terms():
                product._add(x, k, other.constant * a)

        for x, m, a in self.terms():
            for y, n, b in other.terms():
                weight = a * b
                if abs(x - y) <= self.merge_tol * max(abs(x), abs(y)):
                    product._add(x, m + n, weight)
                    continue
                d = y - x
                for k in range(1, m + 1):
                    coef = (-1) ** (m - k) * comb(m + n - k - 1, m - k) * d ** (k - m - n)
                    product._add(x, k, weight * coef)
                for k in range(1, n + 1):
                    coef = (-1) ** (n - k) * comb(m + n - k - 1, n - k) * (-d) ** (k - m - n)
                    product._add(y, k, weight * coef)

        return product

    def scale(self, factor: float) -> 'PoleExpansion':
        return PoleExpansion(
            self.constant * factor,
            {x: [a * factor for a in coefs] for x, coefs in self.poles.items()},
            merge_tol=self.merge_tol
        )

    def __call__(self, z):
        """Evaluate at z (scalar or array)"""
        z = np.asarray(z, dtype=float)
        total = np.full(z.shape, self.constant)
        for x, k, a in self.terms():
            total = total + a / (x + z) ** k
        return float(total) if total.ndim == 0 else total
