"""
Exponential integral E1 and friends

E1(x) = ∫_x^∞ e^{-t}/t dt, evaluated by its power series for x <= 1 and by the
Lentz continued fraction for x > 1. The scaled form e^x E1(x) is what the
closed-form primitives consume: it stays O(1/x) for large x where e^x overflows.
"""
from typing import Union

import numpy as np

from src.exceptions import DomainError

ArrayLike = Union[float, np.ndarray]

EULER_GAMMA = 0.57721566490153286060651209008240243
SERIES_CUTOVER = 1.0
SERIES_TERMS = 40
CF_MAX_ITERATIONS = 2000
CF_EPS = 4e-16
_FPMIN = 1e-300


def _check_domain(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError("E1 is defined for finite x > 0")


def e1_series(x: ArrayLike) -> ArrayLike:
    """
    E1 by the convergent series  -γ - ln x - Σ_{k>=1} (-x)^k / (k·k!)

    Accurate for small and moderate x; loses digits to cancellation beyond x ≈ 5.
    """
    arr = np.asarray(x, dtype=float)
    _check_domain(arr)

    power = np.ones_like(arr)
    total = np.zeros_like(arr)
    for k in range(1, SERIES_TERMS + 1):
        power = power * (-arr) / k
        total = total + power / k

    result = -EULER_GAMMA - np.log(arr) - total
    return float(result) if np.ndim(x) == 0 else result


def e1_continued_fraction_scaled(x: ArrayLike) -> ArrayLike:
    """
    e^x·E1(x) by the modified Lentz continued fraction

    Converges for every x > 0, quickly for x > 1.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(arr)

    b = arr + 1.0
    c = np.full_like(arr, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(arr.shape, dtype=bool)

    for i in range(1, CF_MAX_ITERATIONS + 1):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < CF_EPS
        if done.all():
            break

    return float(h[0]) if np.ndim(x) == 0 else h.reshape(np.shape(x))


def e1_continued_fraction(x: ArrayLike) -> ArrayLike:
    """E1 by the continued fraction (unscaled)"""
    arr = np.asarray(x, dtype=float)
    result = np.exp(-arr) * e1_continued_fraction_scaled(arr)
    return float(result) if np.ndim(x) == 0 else result


def exp_integral_e1_scaled(x: ArrayLike) -> ArrayLike:
    """
    Compute e^x·E1(x) for x > 0

    Args:
        x: Positive scalar or array

    Returns:
        Scaled exponential integral, same shape as x
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(arr)

    out = np.empty_like(arr)
    small = arr <= SERIES_CUTOVER
    if small.any():
        out[small] = np.exp(arr[small]) * e1_series(arr[small])
    if (~small).any():
        out[~small] = e1_continued_fraction_scaled(arr[~small])

    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def exp_integral_e1(x: ArrayLike) -> ArrayLike:
    """
    Compute E1(x) = ∫_x^∞ e^{-t}/t dt

    Args:
        x: Positive scalar or array

    Returns:
        E1(x) to at least 10 significant digits

    Raises:
        DomainError: x non-positive or non-finite
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(arr)

    out = np.empty_like(arr)
    small = arr <= SERIES_CUTOVER
    if small.any():
        out[small] = e1_series(arr[small])
    if (~small).any():
        large = arr[~small]
        out[~small] = np.exp(-large) * e1_continued_fraction_scaled(large)

    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def exp_integral_ei_negative(x: ArrayLike) -> ArrayLike:
    """Ei(-x) = -E1(x) for x > 0"""
    return -exp_integral_e1(x)


def exp_integral_en_scaled(order: int, x: ArrayLike) -> ArrayLike:
    """
    Compute e^x·E_n(x), E_n(x) = ∫_1^∞ e^{-xt}/t^n dt, for n >= 1 and x > 0

    Upward recurrence ε_{k+1} = (1 - x·ε_k)/k from ε_1 for x <= 1, where it
    damps errors; Lentz continued fraction for x > 1.

    Args:
        order: n >= 1
        x: Positive scalar or array

    Returns:
        Scaled generalized exponential integral, same shape as x
    """
    if order < 1:
        raise DomainError("E_n needs order n >= 1")
    if order == 1:
        return exp_integral_e1_scaled(x)

    arr = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(arr)

    out = np.empty_like(arr)
    small = arr <= SERIES_CUTOVER
    if small.any():
        xs = arr[small]
        eps = exp_integral_e1_scaled(xs)
        for k in range(1, order):
            eps = (1.0 - xs * eps) / k
        out[small] = eps
    if (~small).any():
        xl = arr[~small]
        b = xl + order
        c = np.full_like(xl, 1.0 / _FPMIN)
        d = 1.0 / b
        h = d.copy()
        done = np.zeros(xl.shape, dtype=bool)
        for i in range(1, CF_MAX_ITERATIONS + 1):
            an = -float(i * (order - 1 + i))
            b = b + 2.0
            d = 1.0 / (an * d + b)
            c = b + an / c
            delta = c * d
            h = np.where(done, h, h * delta)
            done |= np.abs(delta - 1.0) < CF_EPS
            if done.all():
                break
        out[~small] = h

    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))
