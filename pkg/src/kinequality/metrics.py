"""Empirical Lorenz curves and the Gini / Kolkata indices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySampleError, NegativeValueError, ValidationError, ZeroTotalError


def as_sample(values) -> np.ndarray:
    """Validate ``values`` as a wealth sample and return it as a float array.

    A valid sample has at least two entries, no negative or non-finite
    entries, and a positive total.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size < 2:
        raise EmptySampleError(f"need at least 2 values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("sample contains non-finite values")
    if np.any(x < 0):
        raise NegativeValueError(f"sample contains {int(np.sum(x < 0))} negative value(s)")
    if not x.sum() > 0:
        raise ZeroTotalError("sample total is zero")
    return x


@dataclass(frozen=True)
class LorenzCurve:
    """Piecewise-linear Lorenz curve through ``(x[i], y[i])``, i = 0..n."""

    x: np.ndarray
    y: np.ndarray

    def __call__(self, q):
        return np.interp(q, self.x, self.y)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    def area_gini(self) -> float:
        """Twice the area between the equality line and the curve (trapezoid rule)."""
        dx = np.diff(self.x)
        below = np.sum(dx * (self.y[1:] + self.y[:-1])) / 2.0
        return 1.0 - 2.0 * below


@dataclass(frozen=True)
class IndexReport:
    g: float
    k: float
    n: int
    mean: float


def build_lorenz(values) -> LorenzCurve:
    x = np.sort(as_sample(values), kind="stable")
    n = x.size
    cum = np.concatenate(([0.0], np.cumsum(x)))
    y = cum / cum[-1]
    y[-1] = 1.0
    return LorenzCurve(np.arange(n + 1) / n, y)


def gini(values) -> float:
    """Population Gini index, ``sum_ij |x_i - x_j| / (2 n^2 mean)``.

    Evaluated in O(n log n) through the rank-weighted form of the sorted
    sample; zero values are allowed.
    """
    x = np.sort(as_sample(values))
    n = x.size
    ranks = np.arange(1, n + 1)
    g = float(np.dot(2 * ranks - n - 1, x) / (n * x.sum()))
    return min(max(g, 0.0), 1.0)


def kolkata(values) -> float:
    """Kolkata index: the fraction k with L(k) = 1 - k on the empirical curve."""
    return kolkata_from_lorenz(build_lorenz(values))


def kolkata_from_lorenz(curve: LorenzCurve) -> float:
    # L(x) + x - 1 is strictly increasing, so the crossing segment is unique
    h = curve.y + curve.x - 1.0
    i = int(np.searchsorted(h, 0.0, side="left"))
    if h[i] == 0.0:
        return float(curve.x[i])
    x0, x1 = curve.x[i - 1], curve.x[i]
    y0, y1 = curve.y[i - 1], curve.y[i]
    # solve y0 + s (x - x0) = 1 - x with s the segment slope
    s = (y1 - y0) / (x1 - x0)
    return float(x0 + (1.0 - x0 - y0) / (1.0 + s))


def indices_report(values) -> IndexReport:
    x = as_sample(values)
    return IndexReport(g=gini(x), k=kolkata(x), n=int(x.size), mean=float(x.mean()))
