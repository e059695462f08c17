"""Bracketed root finding for monotone scalar functions."""
from __future__ import annotations

from typing import Callable

from .errors import NumericError


def bisect(f: Callable[[float], float], lo: float, hi: float, *, tol: float = 1e-12,
           max_iter: int = 200) -> float:
    """Return ``x`` in ``[lo, hi]`` with ``|f(x)| <= tol``.

    ``f(lo)`` and ``f(hi)`` must have opposite signs.  Halving continues until
    the bracket cannot be split in floating point, then the endpoint with the
    smaller residual is returned if it meets ``tol``.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NumericError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (fhi > 0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    best, fbest = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    if abs(fbest) > tol:
        raise NumericError(f"bisection stalled at x={best} with residual {fbest}")
    return best
