"""Block-level Monte Carlo of the SWIPT link.

Each block draws one fading gain; each symbol draws a constellation point,
harvests through the floored harvester and is detected by nearest-point search
over the received constellation. None of this touches the closed forms, so it
serves as an independent check on them.

Reproducibility: blocks are cut into fixed-size chunks, chunk ``k`` draws from
``SeedSequence(master_seed, spawn_key=(k,))`` and chunk results are merged in
chunk order. Worker count only changes scheduling, never the numbers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channel
from .harvest import EnergySignal
from .modulation import Constellation, Scheme
from .params import SystemParams

__all__ = ["SimConfig", "SimResult", "constellation_points", "chunk_rng", "simulate_ps", "simulate_ts"]

CHUNK_SYMBOLS = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    """Simulation size and seeding.

    ``stratified`` turns on two variance-reduction devices that keep every
    estimator unbiased: one fading draw per equal-probability stratum of the
    gain distribution (stratum = global block index), and symbols drawn as
    consecutive random permutations of the alphabet (each symbol is still
    marginally uniform). Worth it when harvesting hinges on rare strong-gain
    events; the reported standard errors then overstate the actual error.
    """

    n_blocks: int
    symbols_per_block: int = 1
    master_seed: int = 0
    worker_count: int = 1
    stratified: bool = False

    def __post_init__(self):
        if self.n_blocks < 1 or self.symbols_per_block < 1:
            raise ValueError("n_blocks and symbols_per_block must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")

    @property
    def blocks_per_chunk(self) -> int:
        return max(1, CHUNK_SYMBOLS // self.symbols_per_block)

    def chunks(self) -> list[tuple[int, int, int]]:
        """``(chunk_index, first_block, n_blocks)`` for every chunk."""
        size = self.blocks_per_chunk
        return [(k, start, min(size, self.n_blocks - start))
                for k, start in enumerate(range(0, self.n_blocks, size))]


@dataclass(frozen=True)
class SimResult:
    """Estimates with i.i.d. standard errors (conservative in stratified mode)."""

    q_hat: float
    ssr_hat: float
    aser_hat: float
    q_std_error: float
    ssr_std_error: float
    aser_std_error: float
    rx_power_eh: float  # mean RF power reaching the harvester [W]
    n_blocks: int
    n_symbols: int


def chunk_rng(master_seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(chunk_index,)))


def _gray(n: np.ndarray) -> np.ndarray:
    return n ^ (n >> 1)


def constellation_points(c: Constellation) -> np.ndarray:
    """Unit-average-power complex points, position ``k`` carrying Gray label ``gray(k)``.

    PSK on the unit circle, PAM on the real axis, QAM on a square grid.
    """
    M = c.order
    k = np.arange(M)
    if c.scheme is Scheme.PSK:
        pts = np.exp(2j * np.pi * k / M)
    elif c.scheme is Scheme.PAM:
        pts = (2 * k - M + 1) * math.sqrt(3.0 / (M * M - 1)) + 0j
    else:
        L = math.isqrt(M)
        axis = 2 * np.arange(L) - L + 1.0
        re, im = np.meshgrid(axis, axis, indexing="ij")
        pts = (re + 1j * im).ravel() * math.sqrt(3.0 / (2 * (M - 1)))
    if not np.allclose(np.sort(np.abs(pts) ** 2), np.sort(c.normalized_powers), atol=1e-12):
        raise AssertionError(f"{c.name} geometry does not reproduce the analytic power profile")
    return pts


def gray_labels(c: Constellation) -> np.ndarray:
    M = c.order
    if c.scheme is Scheme.QAM:
        L = math.isqrt(M)
        i, q = np.divmod(np.arange(M), L)
        return _gray(i) * L + _gray(q)
    return _gray(np.arange(M))


def _draw_gains(model: channel.FadingModel, rng: np.random.Generator, cfg: SimConfig,
                first_block: int, n: int) -> np.ndarray:
    if cfg.stratified:
        u = (first_block + np.arange(n) + rng.random(n)) / cfg.n_blocks
        return channel.inverse_cdf(model, u)
    return channel.sample(model, rng, n)


def _draw_symbols(rng: np.random.Generator, cfg: SimConfig, M: int, n: int) -> np.ndarray:
    S = cfg.symbols_per_block
    if not cfg.stratified:
        return rng.integers(0, M, size=(n, S))
    groups = -(-n * S // M)
    perms = rng.permuted(np.tile(np.arange(M), (groups, 1)), axis=1)
    return perms.ravel()[: n * S].reshape(n, S)


def _detect(y: np.ndarray, amplitude: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Nearest-point decisions given receiver CSI (per-block amplitude)."""
    ref = amplitude[:, None, None] * points[None, None, :]
    return np.argmin(np.abs(y[:, :, None] - ref), axis=-1)


def _run(cfg: SimConfig, work: Callable[[np.random.Generator, int, int], np.ndarray]) -> np.ndarray:
    """Run ``work`` on every chunk and return per-chunk sums stacked in chunk order."""
    jobs = cfg.chunks()

    def task(job):
        k, start, n = job
        return work(chunk_rng(cfg.master_seed, k), start, n)

    if cfg.worker_count == 1 or len(jobs) == 1:
        parts = [task(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            parts = list(pool.map(task, jobs))
    return np.vstack(parts)


def _sums(block_q, block_ok, block_rx) -> np.ndarray:
    return np.array([block_q.sum(), (block_q**2).sum(), block_ok.sum(), (block_ok**2).sum(),
                     block_rx.sum()])


def _finish(stacked: np.ndarray, cfg: SimConfig, ssr_scale: float, block_time: float) -> SimResult:
    total = np.zeros(stacked.shape[1])
    for row in stacked:  # fixed order keeps float sums identical for any worker count
        total += row
    e_sum, e_sq, ok_sum, ok_sq, rx_sum = total
    n = cfg.n_blocks
    # per-block energies -> mean harvested power; block_time cancels here
    q_blocks_mean = e_sum / n
    q_hat = q_blocks_mean / block_time
    ok_mean = ok_sum / n

    def stderr(s, s2, scale):
        if n < 2:
            return float("nan")
        var = max(s2 / n - (s / n) ** 2, 0.0) * n / (n - 1)
        return math.sqrt(var / n) * scale

    ok_se = stderr(ok_sum, ok_sq, 1.0)
    return SimResult(
        q_hat=float(q_hat),
        ssr_hat=float(ssr_scale * ok_mean),
        aser_hat=float(1.0 - ok_mean),
        q_std_error=stderr(e_sum, e_sq, 1.0 / block_time),
        ssr_std_error=ssr_scale * ok_se,
        aser_std_error=ok_se,
        rx_power_eh=float(rx_sum / n),
        n_blocks=n,
        n_symbols=n * cfg.symbols_per_block,
    )


def simulate_ps(params: SystemParams, constellation: Constellation, rho_ps: float,
                p_tx: float, cfg: SimConfig) -> SimResult:
    """Simulate a power-splitting receiver at split ``rho_ps`` and transmit power ``p_tx``."""
    if not 0.0 <= rho_ps <= 1.0:
        raise ValueError(f"rho_ps must lie in [0, 1], got {rho_ps}")
    points = constellation_points(constellation)
    sym_power = np.abs(points) ** 2
    model = channel.FadingModel(params.fading_m)
    S = cfg.symbols_per_block
    t_s = params.block_time / S
    eta, p_th, loss = params.eh_efficiency, params.eh_sensitivity, params.path_loss
    noise_std = math.sqrt(params.noise_power / 2.0)

    def work(rng, start, n):
        v = _draw_gains(model, rng, cfg, start, n)
        idx = _draw_symbols(rng, cfg, constellation.order, n)
        p_rx = rho_ps * p_tx * sym_power[idx] * (v[:, None] / loss)
        block_energy = (eta * t_s * np.maximum(p_rx - p_th, 0.0)).sum(axis=1)
        noise = noise_std * (rng.standard_normal((n, S)) + 1j * rng.standard_normal((n, S)))
        amp = np.sqrt((1.0 - rho_ps) * p_tx * v / loss)
        y = amp[:, None] * points[idx] + noise
        ok = (_detect(y, amp, points) == idx).mean(axis=1)
        return _sums(block_energy, ok, p_rx.mean(axis=1))

    return _finish(_run(cfg, work), cfg, 1.0, params.block_time)


def simulate_ts(params: SystemParams, rho_ts: float, p_eh: float, p_info: float,
                constellation: Constellation, energy_signal: EnergySignal,
                cfg: SimConfig) -> SimResult:
    """Simulate a time-switching receiver.

    The transfer phase (``rho_ts`` of each block) harvests from
    ``energy_signal``, whose average power must equal ``p_eh``; the rest of the
    block carries ``symbols_per_block`` data symbols at power ``p_info``.
    """
    if not 0.0 <= rho_ts <= 1.0:
        raise ValueError(f"rho_ts must lie in [0, 1], got {rho_ts}")
    if not math.isclose(energy_signal.average_power, p_eh, rel_tol=1e-9, abs_tol=1e-15):
        raise ValueError(f"energy signal averages {energy_signal.average_power} W, expected {p_eh} W")
    points = constellation_points(constellation)
    model = channel.FadingModel(params.fading_m)
    S = cfg.symbols_per_block
    eta, p_th, loss = params.eh_efficiency, params.eh_sensitivity, params.path_loss
    t_pt = rho_ts * params.block_time
    noise_std = math.sqrt(params.noise_power / 2.0)
    levels = np.array([p for p, _ in energy_signal.levels])
    fractions = np.array([q for _, q in energy_signal.levels])

    def work(rng, start, n):
        v = _draw_gains(model, rng, cfg, start, n)
        p_rx = levels[None, :] * (v[:, None] / loss)
        block_energy = eta * t_pt * (fractions * np.maximum(p_rx - p_th, 0.0)).sum(axis=1)
        rx = rho_ts * (fractions * p_rx).sum(axis=1)
        idx = _draw_symbols(rng, cfg, constellation.order, n)
        noise = noise_std * (rng.standard_normal((n, S)) + 1j * rng.standard_normal((n, S)))
        amp = np.sqrt(p_info * v / loss)
        y = amp[:, None] * points[idx] + noise
        ok = (_detect(y, amp, points) == idx).mean(axis=1)
        return _sums(block_energy, ok, rx)

    return _finish(_run(cfg, work), cfg, 1.0 - rho_ts, params.block_time)
