"""Closed-form Lorenz families and their (g, k) values.

Each ``gk_*`` function returns ``(g, k)``; the matching ``lorenz_*``
function evaluates the curve itself so callers can check that ``(k, 1 - k)``
lies on it.
"""
from __future__ import annotations

import math
from statistics import NormalDist

import numpy as np

from .errors import ValidationError
from .roots import bisect

_SQRT2 = math.sqrt(2.0)
_STD_NORMAL = NormalDist()


def norm_cdf(z: float) -> float:
    """Standard normal CDF through ``erfc`` (accurate in both tails)."""
    return 0.5 * math.erfc(-z / _SQRT2)


def norm_ppf(p: float) -> float:
    return _STD_NORMAL.inv_cdf(p)


# -- power family, L(x) = x**p ------------------------------------------------

def lorenz_power(x, p: float):
    return np.power(x, p)


def gk_power(p: float) -> tuple[float, float]:
    if not p >= 1:
        raise ValidationError(f"power Lorenz exponent must be >= 1, got {p}")
    g = (p - 1.0) / (p + 1.0)
    k = bisect(lambda q: q**p + q - 1.0, 0.0, 1.0)
    return g, k


# -- circle arc through (0, 0) and (1, 1) centred at (t, 1 - t) ---------------

def _arc_radius(t: float) -> float:
    return math.hypot(t, 1.0 - t)


def lorenz_arc(x, t: float):
    r = _arc_radius(t)
    x = np.asarray(x, dtype=float)
    return (1.0 - t) - np.sqrt(np.maximum(r * r - (x - t) ** 2, 0.0))


def gk_circle_arc(t: float) -> tuple[float, float]:
    """(g, k) for the lower arc of the circle centred at ``(t, 1 - t)``.

    The centre sits on the anti-diagonal, so the arc meets it at distance R
    from the centre; g is twice the circular-segment area cut by the chord.
    """
    if not t <= 0:
        raise ValidationError(f"arc centre parameter must be <= 0, got {t}")
    r = _arc_radius(t)
    theta = 2.0 * math.asin(1.0 / (r * _SQRT2))
    g = r * r * (theta - math.sin(theta))
    k = t + r / _SQRT2
    return g, k


# -- exponential distribution ---------------------------------------------------

def lorenz_exponential(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(x < 1.0, (1.0 - x) * np.log1p(-np.minimum(x, 1.0)), 0.0)
    return x + tail


def gk_exponential() -> tuple[float, float]:
    # with u = 1 - k the crossing condition L(k) = 1 - k reads 2u - u ln u = 1
    u = bisect(lambda u: 2.0 * u - u * math.log(u) - 1.0, 1e-300, 1.0)
    return 0.5, 1.0 - u


# -- lognormal distribution -----------------------------------------------------

def lorenz_lognormal(x, sigma: float):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for i, q in enumerate(x):
        if q <= 0.0:
            out[i] = 0.0
        elif q >= 1.0:
            out[i] = 1.0
        else:
            out[i] = norm_cdf(norm_ppf(q) - sigma)
    return out


def gk_lognormal(sigma: float) -> tuple[float, float]:
    """(g, k) of a lognormal with log-scale ``sigma`` (independent of mu).

    k is found by bisection on the normal quantile z = Phi^-1(k), which
    keeps the bracket finite for any sigma.
    """
    if not sigma > 0:
        raise ValidationError(f"sigma must be > 0, got {sigma}")
    g = math.erf(sigma / 2.0)
    z = bisect(lambda z: norm_cdf(z - sigma) - norm_cdf(-z), 0.0, sigma, tol=1e-14)
    return g, norm_cdf(z)
