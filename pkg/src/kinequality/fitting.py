"""Mean rescaling, lognormal and power-law-tail fits, log-binned histograms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

DEFAULT_MIN_TAIL = 50
MAX_XMIN_CANDIDATES = 1000


@dataclass
class RescaledSample:
    values: np.ndarray
    original_mean: float
    dropped_zeros: int = 0


@dataclass(frozen=True)
class LognormalFit:
    mu: float
    sigma: float
    n_used: int


@dataclass(frozen=True)
class PowerLawTailFit:
    alpha: float
    xmin: float
    n_tail: int
    ks: float


@dataclass
class LogHistogram:
    bin_edges: np.ndarray
    densities: np.ndarray

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return np.sqrt(self.bin_edges[:-1] * self.bin_edges[1:])


def _values(sample) -> np.ndarray:
    if isinstance(sample, RescaledSample):
        return sample.values
    return np.asarray(sample, dtype=float).ravel()


def _positive(sample, what="values") -> np.ndarray:
    x = _values(sample)
    if not np.all(np.isfinite(x)):
        raise ValidationError(f"{what} must be finite")
    if np.any(x <= 0):
        raise ValidationError(f"{what} must be strictly positive")
    return x


def rescale_by_mean(sample) -> RescaledSample:
    """Drop zeros and divide the rest by their mean."""
    x = _values(sample)
    if x.size == 0:
        raise ValidationError("empty sample")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValidationError("sample values must be finite and nonnegative")
    kept = x[x > 0]
    if kept.size == 0:
        raise ValidationError("all values are zero")
    mean = float(kept.mean())
    return RescaledSample(kept / mean, mean, int(x.size - kept.size))


def fit_lognormal(sample, min_count: int = 10) -> LognormalFit:
    """Maximum-likelihood lognormal: mean and population std of the logs."""
    x = _positive(sample)
    if x.size < min_count:
        raise ValidationError(f"need at least {min_count} values, got {x.size}")
    if np.all(x == x[0]):
        raise ValidationError("degenerate sample: all values equal, sigma = 0")
    logs = np.log(x)
    mu = float(logs.mean())
    sigma = float(np.sqrt(np.mean((logs - mu) ** 2)))
    return LognormalFit(mu, sigma, int(x.size))


def _tail_fit(tail: np.ndarray, log_tail_sum: float) -> tuple[float, float]:
    """MLE exponent and KS distance for a sorted tail whose first entry is xmin."""
    m = tail.size
    xmin = tail[0]
    denom = log_tail_sum - m * math.log(xmin)
    if denom <= 0:
        return math.nan, math.inf
    alpha = 1.0 + m / denom
    cdf = 1.0 - (tail / xmin) ** (1.0 - alpha)
    i = np.arange(m)
    ks = max(np.max((i + 1) / m - cdf), np.max(cdf - i / m))
    return alpha, float(ks)


def fit_powerlaw_tail(sample, min_tail: int = DEFAULT_MIN_TAIL, xmin: float | None = None,
                      max_candidates: int = MAX_XMIN_CANDIDATES) -> PowerLawTailFit:
    """Continuous power-law tail, alpha = 1 + n / sum(ln(x / xmin)).

    Without a fixed ``xmin`` the cutoff is the observed value minimising the
    KS distance between tail data and fitted law, among cutoffs leaving at
    least ``min_tail`` points.  Large samples are scanned on at most
    ``max_candidates`` distinct order statistics, evenly spaced in rank.
    """
    x = np.sort(_positive(sample))
    if min_tail < 2:
        raise ValidationError("min_tail must be >= 2")
    logs = np.log(x)
    suffix = np.concatenate((np.cumsum(logs[::-1])[::-1], [0.0]))

    if xmin is not None:
        if not xmin > 0:
            raise ValidationError("xmin must be > 0")
        start = int(np.searchsorted(x, xmin, side="left"))
        m = x.size - start
        if m < min_tail:
            raise ValidationError(f"only {m} values >= xmin={xmin}, need {min_tail}")
        # fixed cutoff need not be an observed value
        denom = suffix[start] - m * math.log(xmin)
        if denom <= 0:
            raise ValidationError("all tail values equal xmin; exponent undefined")
        alpha = 1.0 + m / denom
        cdf = 1.0 - (x[start:] / xmin) ** (1.0 - alpha)
        i = np.arange(m)
        ks = float(max(np.max((i + 1) / m - cdf), np.max(cdf - i / m)))
        return PowerLawTailFit(float(alpha), float(xmin), int(m), ks)

    # first occurrence of each distinct value, keeping tails of size >= min_tail
    first = np.flatnonzero(np.concatenate(([True], x[1:] != x[:-1])))
    first = first[x.size - first >= min_tail]
    if first.size == 0:
        raise ValidationError(f"no cutoff leaves at least {min_tail} tail values (n={x.size})")
    if first.size > max_candidates:
        pick = np.unique(np.linspace(0, first.size - 1, max_candidates).round().astype(int))
        first = first[pick]

    best = None
    for start in first:
        alpha, ks = _tail_fit(x[start:], suffix[start])
        if best is None or ks < best[1]:
            best = (alpha, ks, start)
    alpha, ks, start = best
    if not math.isfinite(alpha):
        raise ValidationError("tail exponent undefined: tail values all equal")
    return PowerLawTailFit(float(alpha), float(x[start]), int(x.size - start), float(ks))


def log_binned_histogram(sample, bins_per_decade: int = 10) -> LogHistogram:
    """Probability density on geometric bins spanning ``[min, max]``."""
    if int(bins_per_decade) != bins_per_decade or bins_per_decade < 1:
        raise ValidationError("bins_per_decade must be a positive integer")
    x = _positive(sample)
    if x.size == 0:
        raise ValidationError("empty sample")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        half = 10.0 ** (0.5 / bins_per_decade)
        edges = np.array([lo / half, lo * half])
    else:
        nbins = max(1, math.ceil(bins_per_decade * math.log10(hi / lo) - 1e-9))
        edges = np.geomspace(lo, hi, nbins + 1)
        edges[0], edges[-1] = lo, hi
    counts, _ = np.histogram(x, bins=edges)
    dens = counts / (x.size * np.diff(edges))
    return LogHistogram(edges, dens)


def collapse_distance(h1: LogHistogram, h2: LogHistogram) -> float:
    """L1 distance between two histogram densities over their common support.

    Both densities are treated as step functions and compared on the merged
    grid of their bin edges, so the integral is exact.
    """
    lo = max(h1.bin_edges[0], h2.bin_edges[0])
    hi = min(h1.bin_edges[-1], h2.bin_edges[-1])
    if not lo < hi:
        raise ValidationError("histogram supports do not overlap")
    grid = np.union1d(h1.bin_edges, h2.bin_edges)
    grid = grid[(grid >= lo) & (grid <= hi)]
    mids = np.sqrt(grid[:-1] * grid[1:])
    d1 = _step_density(h1, mids)
    d2 = _step_density(h2, mids)
    return float(np.sum(np.abs(d1 - d2) * np.diff(grid)))


def _step_density(h: LogHistogram, points: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(h.bin_edges, points, side="right") - 1
    idx = np.clip(idx, 0, h.densities.size - 1)
    return h.densities[idx]
