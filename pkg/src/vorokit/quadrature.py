"""Small shared quadrature helpers.

Everything here integrates vectorised complex-valued functions
f(s: ndarray[K]) -> ndarray[K] or ndarray[K, B] (a batch of B integrands
sharing the same nodes) along straight segments in the complex plane, using
Gauss–Legendre panels with adaptive bisection.  Error control is absolute and
per batch entry is the max-norm across the batch.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = ["gauss_nodes", "segment", "adaptive_segment", "ToleranceNotMet"]


class ToleranceNotMet(ArithmeticError):
    """Quadrature could not certify the requested absolute tolerance."""

    def __init__(self, requested: float, achieved: float, where: str = ""):
        self.requested = requested
        self.achieved = achieved
        super().__init__(
            f"requested abs tol {requested:g}, achieved estimate {achieved:g}"
            + (f" ({where})" if where else "")
        )


@lru_cache(maxsize=8)
def gauss_nodes(deg: int):
    x, w = leggauss(deg)
    return x, w


def segment(f, a: complex, b: complex, deg: int = 24):
    """Plain GL quadrature of f along the straight segment a→b."""
    x, w = gauss_nodes(deg)
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * x
    vals = f(nodes)
    if vals.ndim == 1:
        return half * (w @ vals)
    return half * np.tensordot(w, vals, axes=(0, 0))


def adaptive_segment(f, a: complex, b: complex, tol: float, deg: int = 24, max_depth: int = 13):
    """Adaptive bisection on a→b.  Returns (integral, error_estimate).

    The error estimate is the accumulated |whole − two halves| over accepted
    panels; it overstates the true error of the returned refined value.
    """
    whole = segment(f, a, b, deg)
    return _adapt(f, a, b, whole, tol, deg, max_depth)


def _adapt(f, a, b, whole, tol, deg, depth):
    mid = 0.5 * (a + b)
    left = segment(f, a, mid, deg)
    right = segment(f, mid, b, deg)
    better = left + right
    err = float(np.max(np.abs(whole - better)))
    if err <= tol or depth <= 0:
        return better, err
    lv, le = _adapt(f, a, mid, left, 0.6 * tol, deg, depth - 1)
    rv, re_ = _adapt(f, mid, b, right, 0.6 * tol, deg, depth - 1)
    return lv + rv, le + re_
