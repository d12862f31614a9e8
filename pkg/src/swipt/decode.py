"""Information-decoding metrics: Q-function, fading-averaged SER, symbol success rates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate, special

if TYPE_CHECKING:
    from .modulation import Constellation
    from .params import SystemParams

__all__ = ["IdReport", "PeakPowerError", "gaussian_tail", "mean_snr", "aser", "ssr_ps", "ssr_ts"]

_SQRT2 = math.sqrt(2.0)


class PeakPowerError(ValueError):
    """Modulated symbols would exceed the peak transmit power."""

    def __init__(self, peak_symbol_power: float, p_peak: float):
        self.peak_symbol_power = peak_symbol_power
        self.p_peak = p_peak
        super().__init__(
            f"peak symbol power {peak_symbol_power:.6g} W exceeds p_peak = {p_peak:.6g} W"
        )


@dataclass(frozen=True)
class IdReport:
    aser: float
    ssr: float


def gaussian_tail(x):
    """Gaussian Q-function, ``P(N(0,1) > x)``; scalar in, scalar out."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / _SQRT2)
    return float(out) if np.ndim(out) == 0 else out


def mean_snr(params: "SystemParams", effective_power: float) -> float:
    """Average SNR at the decoder for ``effective_power`` watts delivered to it."""
    return effective_power / (params.path_loss * params.noise_power)


def aser(params: "SystemParams", constellation: "Constellation", effective_power: float) -> float:
    """Fading-averaged SER with ``effective_power`` W feeding the decoder.

    Integrated in the variable ``t = m v`` so the fading density becomes a
    unit-rate gamma kernel; relative tolerance 1e-10.
    """
    if effective_power < 0:
        raise ValueError(f"effective_power must be >= 0, got {effective_power}")
    from .modulation import ser_conditional

    if effective_power == 0:
        return constellation.zero_snr_ser()

    m = params.fading_m
    snr_per_t = mean_snr(params, effective_power) / m
    log_norm = -math.lgamma(m)

    def integrand(t: float) -> float:
        if t <= 0:
            dens = 1.0 if m == 1 else 0.0
        else:
            dens = math.exp((m - 1) * math.log(t) - t + log_norm)
        return ser_conditional(constellation, snr_per_t * t) * dens

    # Break points at the density mode and at a few multiples of the SER knee keep
    # the adaptive rule from stepping over the steep region near t = 0.
    knee = 1.0 / max(snr_per_t * constellation.g_coeff, 1e-300)
    points = sorted({p for p in (knee, 10 * knee, 100 * knee, float(m)) if 0 < p < 60 + 2 * m})
    edges = [0.0, *points, 60.0 + 2.0 * m]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-11, limit=200)
        total += val
    tail, _ = integrate.quad(integrand, edges[-1], np.inf, epsabs=1e-300, epsrel=1e-10, limit=200)
    return float(min(max(total + tail, 0.0), 1.0))


def ssr_ps(params: "SystemParams", constellation: "Constellation", rho_ps: float, p_tx: float) -> IdReport:
    """Average symbol success rate of a power-splitting receiver."""
    if not 0.0 <= rho_ps <= 1.0:
        raise ValueError(f"rho_ps must lie in [0, 1], got {rho_ps}")
    a = aser(params, constellation, (1.0 - rho_ps) * p_tx)
    return IdReport(a, 1.0 - a)


def ssr_ts(params: "SystemParams", constellation: "Constellation", rho_ts: float, p_info: float) -> IdReport:
    """Symbol success rate of a time-switching receiver, normalized per unit block time."""
    if not 0.0 <= rho_ts <= 1.0:
        raise ValueError(f"rho_ts must lie in [0, 1], got {rho_ts}")
    peak = constellation.papr * p_info
    if peak > params.p_peak * (1 + 1e-12):
        raise PeakPowerError(peak, params.p_peak)
    a = aser(params, constellation, p_info)
    return IdReport(a, (1.0 - rho_ts) * (1.0 - a))
