"""Unit-mean Nakagami-m power gain (gamma with shape m, scale 1/m), integer m only.

The partial moments used by the harvesting closed forms reduce to finite
exponential-polynomial sums for integer m, so no special-function library is
needed on the analytic path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["FadingModel", "pdf", "upper_tail", "upper_partial_mean", "sample", "inverse_cdf"]


@dataclass(frozen=True)
class FadingModel:
    m: int = 1

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError(f"Nakagami m must be an integer >= 1, got {self.m!r}")

    @property
    def variance(self) -> float:
        return 1.0 / self.m


def pdf(model: FadingModel, v):
    """Density of the power gain at ``v >= 0``."""
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise ValueError("fading gain must be >= 0")
    m = model.m
    with np.errstate(divide="ignore"):
        log_f = m * math.log(m) - m * v - math.lgamma(m)
        if m > 1:
            log_f = log_f + (m - 1) * np.log(v)
    out = np.exp(log_f)
    return float(out) if out.ndim == 0 else out


def _poisson_head(m: int, x):
    """``exp(-x) * sum_{k<n} x^k / k!`` for n = m, each term in log space."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_x = np.log(x)
        total = np.exp(-x)
        for k in range(1, m):
            total = total + np.where(x > 0, np.exp(-x + k * log_x - math.lgamma(k + 1)), 0.0)
    return np.where(np.isinf(x), 0.0, total)


def upper_tail(model: FadingModel, a):
    """``P(v > a)``: regularized upper incomplete gamma Q(m, m a) as a finite sum."""
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ValueError("threshold must be >= 0")
    with np.errstate(over="ignore"):
        out = _poisson_head(model.m, model.m * a)
    return float(out) if out.ndim == 0 else out


def upper_partial_mean(model: FadingModel, a):
    """``E[v; v > a]``, i.e. the integral of ``v f(v)`` over ``(a, inf)``.

    ``v f_m(v)`` is the density of a gamma(m + 1, 1/m) variable, so this is
    Q(m + 1, m a).
    """
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ValueError("threshold must be >= 0")
    with np.errstate(over="ignore"):
        out = _poisson_head(model.m + 1, model.m * a)
    return float(out) if out.ndim == 0 else out


def sample(model: FadingModel, rng: np.random.Generator, size=None):
    """Draw power gains as the mean of m unit exponentials (Erlang construction)."""
    m = model.m
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    draws = rng.standard_exponential(shape + (m,))
    out = draws.sum(axis=-1) / m
    return float(out) if size is None else out


def inverse_cdf(model: FadingModel, u):
    """Quantile function; used for stratified fading draws in the simulator."""
    u = np.asarray(u, dtype=float)
    if model.m == 1:
        return -np.log1p(-u)
    from scipy import special

    return special.gammaincinv(model.m, u) / model.m
