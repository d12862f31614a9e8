"""Closed-form versus oracle check suites behind ``swipt validate``.

Each check yields a :class:`Check` carrying the measured delta and its
tolerance; formatting is fixed-precision so two runs with the same seed give
byte-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import decode, harvest, optimize
from .modulation import build
from .montecarlo import SimConfig, simulate_ps, simulate_ts
from .params import SystemParams

SUITES = ("harvest", "decode", "optimize", "all")


@dataclass(frozen=True)
class Check:
    name: str
    delta: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.delta) <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<40s} delta={self.delta:+.4e}  tol={self.tol:.1e}"


def sign_changes(diff) -> int:
    """Sign changes along ``diff``, ignoring exact ties (e.g. the q0 = 0 endpoint)."""
    s = [np.sign(x) for x in diff if abs(x) > 1e-12]
    return sum(1 for a, b in zip(s[:-1], s[1:]) if a != b)


def harvest_checks(params: SystemParams, seed: int, workers: int, n_symbols: int) -> Iterator[Check]:
    for scheme in ("psk", "pam", "qam"):
        for order in (4, 16):
            c = build(scheme, order)
            for rho in (0.3, 0.7, 1.0):
                exact = harvest.avg_power_ps(params, c, rho, params.p_ave).avg_harvested_power
                cfg = SimConfig(n_symbols, master_seed=seed, worker_count=workers, stratified=True)
                sim = simulate_ps(params, c, rho, params.p_ave, cfg)
                yield Check(f"harvest/ps/{c.name}/rho={rho}", sim.q_hat / exact - 1.0, 1e-2)
    for p_eh_share in (0.5, 1.0):
        rho = p_eh_share * params.p_ave / params.p_peak
        exact = harvest.avg_power_ts(params, rho, params.p_peak).avg_harvested_power
        signal = harvest.optimal_energy_signal(params.p_peak, params.p_peak, params.eh_sensitivity)
        cfg = SimConfig(n_symbols, master_seed=seed, worker_count=workers)
        sim = simulate_ts(params, rho, params.p_peak, params.p_ave, build("qam", 16), signal, cfg)
        yield Check(f"harvest/ts/rho={rho:.4f}", sim.q_hat / exact - 1.0, 1e-2)


def decode_checks(params: SystemParams, seed: int, workers: int, n_symbols: int) -> Iterator[Check]:
    for snr_db in (10, 20, 30):
        power = 10 ** (snr_db / 10) * params.path_loss * params.noise_power
        for scheme in ("qam", "psk", "pam"):
            c = build(scheme, 16)
            exact = decode.aser(params, c, power)
            # stretch low-error points so they see ~0.04 * n_symbols errors, capped at 1e7
            n = int(min(max(n_symbols, 0.04 * n_symbols / exact), 1e7))
            sim = simulate_ps(params, c, 0.0, power, SimConfig(n, master_seed=seed, worker_count=workers))
            tol = 5e-2 if scheme == "psk" else 2e-2
            yield Check(f"decode/{c.name}/snr={snr_db}dB", sim.aser_hat / exact - 1.0, tol)


def optimize_checks(params: SystemParams, n_points: int = 20) -> Iterator[Check]:
    psk = build("psk", 16)
    if params.fading_m == 1:
        q_max = optimize.q_ps_max(params, psk)
        worst_rho = worst_q = 0.0
        for q0 in np.linspace(q_max / n_points, q_max, n_points):
            closed = optimize.rho_star_psk_rayleigh(params, q0)
            bisect = optimize.solve_p1(params, psk, q0).rho_ps
            worst_rho = max(worst_rho, abs(closed - bisect))
            back = harvest.avg_power_ps(params, psk, closed, params.p_ave).avg_harvested_power
            worst_q = max(worst_q, abs(back / q0 - 1.0))
        yield Check("optimize/lambert_vs_bisection_rho", worst_rho, 1e-6)
        yield Check("optimize/lambert_roundtrip_q0", worst_q, 1e-10)

    qam = build("qam", 16)
    q_max = optimize.q_ts_max(params)
    worst_q = worst_p = 0.0
    for q0 in np.linspace(q_max / n_points, q_max, n_points):
        d = optimize.solve_p2(params, qam, q0)
        if d.peak_clamped:
            continue
        worst_q = max(worst_q, abs(d.achieved_q - q0))
        worst_p = max(worst_p, abs(d.rho_ts * d.p_eh + (1 - d.rho_ts) * d.p_info - params.p_ave))
    yield Check("optimize/ts_harvest_constraint_tight_W", worst_q, 1e-9)
    yield Check("optimize/ts_power_constraint_tight_W", worst_p, 1e-9)

    q_common = min(optimize.q_ps_max(params, qam), optimize.q_ts_max(params))
    grid = np.linspace(0.0, q_common, 41)
    diff = [optimize.solve_p1(params, qam, q).achieved_ssr - optimize.solve_p2(params, qam, q).achieved_ssr
            for q in grid]
    expected = 0 if params.eh_sensitivity == 0 else 1
    yield Check("optimize/ps_ts_crossovers", sign_changes(diff) - expected, 0)


def run_suite(params: SystemParams, suite: str = "all", seed: int = 0, workers: int = 1,
              n_symbols: int = 10**6) -> tuple[str, bool]:
    """Run a named suite; return the report text and whether every check passed."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    groups = []
    if suite in ("harvest", "all"):
        groups.append(harvest_checks(params, seed, workers, n_symbols))
    if suite in ("decode", "all"):
        groups.append(decode_checks(params, seed, workers, n_symbols))
    if suite in ("optimize", "all"):
        groups.append(optimize_checks(params))
    checks = [c for g in groups for c in g]
    n_fail = sum(not c.passed for c in checks)
    lines = [f"# suite={suite} seed={seed} symbols={n_symbols}"]
    lines += [c.line() for c in checks]
    lines.append(f"# {len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n", n_fail == 0

