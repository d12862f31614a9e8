"""Rate-energy design: best symbol success rate subject to a harvested-power target.

Power splitting is solved by bisection on the split ratio (harvested power is
monotone in it); time switching has a closed-form optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal

from . import decode, harvest
from .modulation import Constellation
from .params import SystemParams

__all__ = [
    "InfeasibleTarget",
    "PsDesign",
    "TsDesign",
    "TradeoffPoint",
    "lambert_w0",
    "q_ps_max",
    "q_ts_max",
    "solve_p1",
    "solve_p2",
    "rho_star_psk_rayleigh",
    "tradeoff_curve",
]


class InfeasibleTarget(ValueError):
    """Requested harvested power exceeds what the scheme can deliver."""

    def __init__(self, q0: float, q_max: float, scheme: str):
        self.q0 = q0
        self.q_max = q_max
        self.scheme = scheme
        super().__init__(
            f"{scheme}: required harvested power {q0:.6g} W exceeds the feasible maximum {q_max:.6g} W"
        )


@dataclass(frozen=True)
class PsDesign:
    rho_ps: float
    p_tx: float
    achieved_q: float
    achieved_ssr: float
    converged: bool = True
    iterations: int = 0


@dataclass(frozen=True)
class TsDesign:
    rho_ts: float
    p_eh: float
    p_info: float
    achieved_q: float
    achieved_ssr: float
    peak_clamped: bool = False
    average_power_slack: float = 0.0


@dataclass(frozen=True)
class TradeoffPoint:
    q0: float
    ssr_star: float
    scheme: str
    modulation: str
    order: int
    m: int
    p_th: float
    rho: float
    p_tx: float = float("nan")
    p_eh: float = float("nan")
    p_info: float = float("nan")
    feasible: bool = True
    design: PsDesign | TsDesign | None = field(default=None, compare=False, repr=False)


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function for ``x >= 0`` (Halley iteration)."""
    x = float(x)
    if not x >= 0:
        raise ValueError(f"lambert_w0 is only implemented for x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    if x < 1.0:
        w = x * (1.0 - x + 1.5 * x * x) if x < 0.3 else math.log1p(x) * 0.8
    else:
        lx = math.log(x)
        w = lx - math.log(lx) if x > 3.0 else 0.5 + 0.25 * lx
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


def q_ps_max(params: SystemParams, constellation: Constellation) -> float:
    """Largest harvested power reachable by power splitting (all power to the harvester)."""
    return harvest.avg_power_ps(params, constellation, 1.0, params.p_ave).avg_harvested_power


def q_ts_max(params: SystemParams) -> float:
    """Largest harvested power reachable by time switching (whole energy budget in transfer)."""
    return params.eh_efficiency * params.p_ave * harvest.psi(params) / params.path_loss


def _check_q0(q0: float, q_max: float, scheme: str, rtol: float = 1e-12) -> float:
    if not q0 >= 0:
        raise ValueError(f"required harvested power must be >= 0, got {q0}")
    if q0 > q_max * (1 + rtol):
        raise InfeasibleTarget(q0, q_max, scheme)
    return min(q0, q_max)


def solve_p1(params: SystemParams, constellation: Constellation, q0: float,
             xtol: float = 1e-13, max_iter: int = 200) -> PsDesign:
    """Power-splitting design: ``p_tx = p_ave`` and the smallest split meeting ``q0``."""
    p_tx = params.p_ave
    q_max = q_ps_max(params, constellation)
    q0 = _check_q0(q0, q_max, "PS")

    def q_at(rho: float) -> float:
        return harvest.avg_power_ps(params, constellation, rho, p_tx).avg_harvested_power

    if q0 == 0.0:
        rho, iters, converged = 0.0, 0, True
    elif q0 >= q_max:
        rho, iters, converged = 1.0, 0, True
    else:
        lo, hi = 0.0, 1.0
        iters = 0
        while hi - lo > xtol and iters < max_iter:
            mid = 0.5 * (lo + hi)
            if q_at(mid) >= q0:
                hi = mid
            else:
                lo = mid
            iters += 1
        rho = hi  # keeps the harvested-power constraint satisfied
        converged = hi - lo <= xtol
    ssr = decode.ssr_ps(params, constellation, rho, p_tx).ssr
    return PsDesign(rho, p_tx, q_at(rho), ssr, converged, iters)


def rho_star_psk_rayleigh(params: SystemParams, q0: float) -> float:
    """Closed-form split ratio for constant-envelope signalling over Rayleigh fading."""
    if params.fading_m != 1:
        raise ValueError("closed form needs Rayleigh fading (fading_m = 1)")
    p_th, eta = params.eh_sensitivity, params.eh_efficiency
    q_max = eta * params.p_ave / params.path_loss * math.exp(-p_th * params.path_loss / params.p_ave)
    if not 0.0 < q0 <= q_max * (1 + 1e-12):
        raise ValueError(f"q0 must lie in (0, {q_max:.6g}], got {q0}")
    if p_th == 0.0:
        return q0 * params.path_loss / (eta * params.p_ave)
    return p_th * params.path_loss / (params.p_ave * lambert_w0(eta * p_th / q0))


def solve_p2(params: SystemParams, constellation: Constellation, q0: float) -> TsDesign:
    """Time-switching design: transfer at peak power, spend the rest on information."""
    psi = harvest.psi(params)
    q_max = q_ts_max(params)
    q0 = _check_q0(q0, q_max, "TS")
    eta, path_loss = params.eh_efficiency, params.path_loss

    energy_budget = q0 * path_loss / (eta * psi)  # rho * p_eh needed to meet q0
    rho = energy_budget / params.p_peak
    p_eh = params.p_peak
    if rho >= 1.0:
        p_info = 0.0
    else:
        p_info = max(params.p_ave - energy_budget, 0.0) / (1.0 - rho)

    clamped = False
    info_cap = params.p_peak / constellation.papr
    if p_info > info_cap:
        p_info = info_cap
        clamped = True
    slack = params.p_ave - (rho * p_eh + (1.0 - rho) * p_info)
    achieved_q = harvest.avg_power_ts(params, rho, p_eh).avg_harvested_power
    ssr = decode.ssr_ts(params, constellation, rho, p_info).ssr
    return TsDesign(rho, p_eh, p_info, achieved_q, ssr, clamped, slack)


def tradeoff_curve(params: SystemParams, constellation: Constellation,
                   scheme: Literal["PS", "TS"] | str, q0_grid: Iterable[float]) -> list[TradeoffPoint]:
    """Optimal symbol success rate at each required harvested power in ``q0_grid``.

    Infeasible targets become ``feasible=False`` rows instead of aborting the sweep.
    """
    scheme = scheme.upper()
    if scheme not in ("PS", "TS"):
        raise ValueError(f"scheme must be PS or TS, got {scheme!r}")
    common = dict(scheme=scheme, modulation=constellation.scheme.name, order=constellation.order,
                  m=params.fading_m, p_th=params.eh_sensitivity)
    points = []
    for q0 in sorted(float(q) for q in q0_grid):
        try:
            if scheme == "PS":
                d = solve_p1(params, constellation, q0)
                points.append(TradeoffPoint(q0=q0, ssr_star=d.achieved_ssr, rho=d.rho_ps,
                                            p_tx=d.p_tx, design=d, **common))
            else:
                d = solve_p2(params, constellation, q0)
                points.append(TradeoffPoint(q0=q0, ssr_star=d.achieved_ssr, rho=d.rho_ts,
                                            p_eh=d.p_eh, p_info=d.p_info, design=d, **common))
        except InfeasibleTarget:
            points.append(TradeoffPoint(q0=q0, ssr_star=float("nan"), rho=float("nan"),
                                        feasible=False, **common))
    return points
