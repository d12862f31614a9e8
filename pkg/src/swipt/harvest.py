"""Energy harvesting with a sensitivity floor: PS/TS average harvested power.

The harvester is linear above its sensitivity floor and dead below it, so the
harvested power is a convex function of received power. That convexity is
why high-PAPR constellations, deep fading and on-off energy signals all help.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channel
from .modulation import Constellation
from .params import SystemParams

__all__ = [
    "EnergySignal",
    "HarvestReport",
    "harvested_energy",
    "avg_power_ps",
    "avg_power_ps_partial_moments",
    "avg_power_ps_rayleigh",
    "jensen_lower_bound",
    "psi",
    "avg_power_ts",
    "optimal_energy_signal",
    "solve_pa_bruteforce",
    "random_energy_signal",
]


@dataclass(frozen=True)
class HarvestReport:
    avg_harvested_power: float
    activation_prob: float


@dataclass(frozen=True)
class EnergySignal:
    """Piecewise-constant transmit power over the power-transfer phase.

    ``levels`` holds ``(power_W, time_fraction)`` pairs; fractions sum to one.
    """

    levels: tuple[tuple[float, float], ...]

    def __post_init__(self):
        fractions = [q for _, q in self.levels]
        if any(q < -1e-15 for q in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
            raise ValueError(f"time fractions must be >= 0 and sum to 1, got {fractions}")
        if any(p < 0 for p, _ in self.levels):
            raise ValueError("power levels must be >= 0")

    @property
    def average_power(self) -> float:
        return math.fsum(p * q for p, q in self.levels)

    @property
    def peak_power(self) -> float:
        return max(p for p, q in self.levels if q > 0)

    def harvest_rate(self, gain: float, p_th: float) -> float:
        """Mean of ``(gain * P - p_th)^+`` over the phase (per unit efficiency)."""
        return math.fsum(q * max(gain * p - p_th, 0.0) for p, q in self.levels)


def harvested_energy(p_rx: float, t_s: float, eta: float, p_th: float) -> float:
    """Energy [J] collected over ``t_s`` seconds at received power ``p_rx``."""
    if min(p_rx, t_s, p_th) < 0 or not 0.0 <= eta <= 1.0:
        raise ValueError("inputs must be >= 0 and eta in [0, 1]")
    return eta * t_s * max(p_rx - p_th, 0.0)


def _nakagami_excess_factor(m: int, a: float) -> float:
    """``exp(-m a) * (1 + sum_k a^(k+1) m^k (m-k-1)/(k+1)!)``.

    Equals ``E[(v - a)^+]`` for unit-mean gamma(m) fading, i.e. the fraction of
    the mean received power that survives a floor sitting at ``a`` times it.
    """
    if a == 0.0:
        return 1.0
    if math.isinf(a):
        return 0.0
    # each term carries its own exp(-m a) so huge thresholds underflow instead of overflowing
    log_a, log_m = math.log(a), math.log(m)
    total = math.exp(-m * a)
    for k in range(m - 1):
        total += math.exp(-m * a + (k + 1) * log_a + k * log_m + math.log(m - k - 1) - math.lgamma(k + 2))
    return total


def _ps_symbol_rx_power(params: SystemParams, constellation: Constellation, rho_ps: float, p_tx: float):
    if not 0.0 <= rho_ps <= 1.0:
        raise ValueError(f"rho_ps must lie in [0, 1], got {rho_ps}")
    if p_tx < 0:
        raise ValueError(f"p_tx must be >= 0, got {p_tx}")
    return rho_ps * p_tx * constellation.normalized_powers / params.path_loss


def avg_power_ps(params: SystemParams, constellation: Constellation, rho_ps: float, p_tx: float) -> HarvestReport:
    """Average harvested power of a power-splitting receiver, Nakagami-m closed form."""
    mean_rx = _ps_symbol_rx_power(params, constellation, rho_ps, p_tx)
    p_th, m = params.eh_sensitivity, params.fading_m
    fading = channel.FadingModel(m)
    q = 0.0
    act = 0.0
    for c in mean_rx.tolist():
        if c <= 0.0:
            continue
        a = p_th / c
        q += c * _nakagami_excess_factor(m, a)
        act += channel.upper_tail(fading, a)
    n = constellation.order
    return HarvestReport(float(params.eh_efficiency * q / n), float(act / n))


def avg_power_ps_partial_moments(params: SystemParams, constellation: Constellation,
                                 rho_ps: float, p_tx: float) -> float:
    """Same quantity via the truncated-moment form ``c E[v; v>a] - P_th P(v>a)``."""
    mean_rx = _ps_symbol_rx_power(params, constellation, rho_ps, p_tx)
    p_th = params.eh_sensitivity
    fading = channel.FadingModel(params.fading_m)
    terms = []
    for c in mean_rx.tolist():
        if c <= 0.0:
            continue
        a = p_th / c
        terms.append(c * channel.upper_partial_mean(fading, a) - p_th * channel.upper_tail(fading, a))
    return params.eh_efficiency * math.fsum(terms) / constellation.order


def avg_power_ps_rayleigh(params: SystemParams, constellation: Constellation, rho_ps: float, p_tx: float) -> float:
    """Rayleigh (m = 1) special case: each symbol contributes ``c exp(-P_th / c)``."""
    if params.fading_m != 1:
        raise ValueError(f"Rayleigh form requires fading_m = 1, got {params.fading_m}")
    mean_rx = _ps_symbol_rx_power(params, constellation, rho_ps, p_tx)
    p_th = params.eh_sensitivity
    total = sum(c * math.exp(-p_th / c) for c in mean_rx.tolist() if c > 0.0)
    return params.eh_efficiency * total / constellation.order


def jensen_lower_bound(params: SystemParams, constellation: Constellation, rho_ps: float, p_tx: float) -> float:
    """Harvested power with symbol-power and fading variance removed; never above the true value."""
    _ps_symbol_rx_power(params, constellation, rho_ps, p_tx)
    return params.eh_efficiency * max(rho_ps * p_tx / params.path_loss - params.eh_sensitivity, 0.0)


def psi(params: SystemParams) -> float:
    """Fraction of peak-power received energy that survives the floor, averaged over fading."""
    a = params.eh_sensitivity * params.path_loss / params.p_peak
    return _nakagami_excess_factor(params.fading_m, a)


def avg_power_ts(params: SystemParams, rho_ts: float, p_eh: float) -> HarvestReport:
    """Average harvested power of a time-switching receiver.

    Assumes the on-off energy signal: full peak power for a ``p_eh / p_peak``
    share of the transfer phase, silence otherwise.
    """
    if not 0.0 <= rho_ts <= 1.0:
        raise ValueError(f"rho_ts must lie in [0, 1], got {rho_ts}")
    if p_eh < 0 or p_eh > params.p_peak * (1 + 1e-12):
        raise ValueError(f"p_eh must lie in [0, p_peak={params.p_peak}], got {p_eh}")
    q = params.eh_efficiency * rho_ts * p_eh / params.path_loss * psi(params)
    a_peak = params.eh_sensitivity * params.path_loss / params.p_peak
    act = float(channel.upper_tail(channel.FadingModel(params.fading_m), a_peak))
    return HarvestReport(q, act)


def optimal_energy_signal(p_eh: float, p_peak: float, p_th: float = 0.0) -> EnergySignal:
    """On-off signal at ``p_peak`` with duty cycle ``p_eh / p_peak``.

    ``p_th`` does not change the answer; it is accepted so callers can pass the
    same arguments as :func:`solve_pa_bruteforce`.
    """
    if p_eh < 0 or p_eh > p_peak * (1 + 1e-12):
        raise ValueError(f"average energy-signal power {p_eh} must lie in [0, {p_peak}]")
    duty = min(p_eh / p_peak, 1.0)
    if duty >= 1.0:
        return EnergySignal(((p_peak, 1.0),))
    return EnergySignal(((p_peak, duty), (0.0, 1.0 - duty)))


def solve_pa_bruteforce(p_eh: float, p_peak: float, p_th: float, v: float,
                        grid_resolution: int = 200) -> EnergySignal:
    """Exhaustive search over two-level energy signals with average power ``p_eh``.

    Objective is ``sum_i q_i (v P_i - p_th)^+`` with ``v`` the total channel gain.
    Levels run over a uniform grid on ``[0, p_peak]`` (plus ``p_eh`` itself);
    for each pair the time split is fixed by the average-power constraint.
    """
    if grid_resolution < 10:
        raise ValueError("grid_resolution must be >= 10")
    if p_eh < 0 or p_eh > p_peak * (1 + 1e-12):
        raise ValueError(f"average power {p_eh} is infeasible for peak {p_peak}")
    if p_eh == 0.0:
        return EnergySignal(((0.0, 1.0),))

    grid = np.union1d(np.linspace(0.0, p_peak, grid_resolution + 1), [p_eh])
    lo = grid[grid <= p_eh][:, None]
    hi = grid[grid >= p_eh][None, :]
    span = hi - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        q_hi = np.where(span > 0, (p_eh - lo) / span, 1.0)
    q_lo = 1.0 - q_hi
    obj = q_lo * np.maximum(v * lo - p_th, 0.0) + q_hi * np.maximum(v * hi - p_th, 0.0)
    i, j = np.unravel_index(np.argmax(obj), obj.shape)
    p_lo, p_hi, qh = float(lo[i, 0]), float(hi[0, j]), float(q_hi[i, j])
    if p_lo == p_hi or qh >= 1.0:
        return EnergySignal(((p_hi, 1.0),))
    return EnergySignal(((p_hi, qh), (p_lo, 1.0 - qh)))


def random_energy_signal(rng: np.random.Generator, p_eh: float, p_peak: float,
                         n_levels: int) -> EnergySignal:
    """Random ``n_levels`` signal in [0, p_peak] rescaled to average exactly ``p_eh``."""
    levels = rng.uniform(0.0, p_peak, n_levels)
    q = rng.dirichlet(np.ones(n_levels))
    mean = float(q @ levels)
    if mean > p_eh:
        levels = levels * (p_eh / mean)
    elif mean < p_eh:
        # shrink distances to the peak so the mean moves up to p_eh
        levels = p_peak - (p_peak - levels) * (p_peak - p_eh) / (p_peak - mean)
    levels = np.clip(levels, 0.0, p_peak)
    return EnergySignal(tuple((float(p), float(w)) for p, w in zip(levels, q)))

