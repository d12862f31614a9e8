"""Command-line front end: ``swipt {tradeoff,optimize,simulate,validate}``.

Output files start with a header recording a hash of the link budget and
arguments, the seed and the package version, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__, checks, harvest, optimize
from .modulation import build
from .montecarlo import SimConfig, simulate_ps, simulate_ts
from .params import (
    ENV_PREFIX,
    ConfigError,
    ParamError,
    SystemParams,
    apply_env_overrides,
    dbm_to_watts,
    default_params,
    load_config,
)

CSV_COLUMNS = ("scheme", "modulation", "M", "m", "P_th_W", "q0_W", "ssr_star", "rho",
               "p_tx_W", "p_eh_W", "p_info_W", "feasible")

# (param overrides, modulation, order); every recipe sweeps both PS and TS
RECIPES = {
    "fig1": [({}, mod, 16) for mod in ("psk", "pam", "qam")],
    "fig2": [({}, mod, 4) for mod in ("psk", "pam", "qam")],
    "fig3": [({"eh_sensitivity": 0.0}, "qam", 16), ({"eh_sensitivity": dbm_to_watts(-20)}, "qam", 16)],
    "fig4": [({"fading_m": m}, "qam", 16) for m in (1, 2, 5, 20)],
}


def parse_power(text: str) -> float:
    """``'1e-6'`` -> 1e-6 W; ``'-30dBm'`` -> 1e-6 W."""
    t = str(text).strip()
    if t.lower().endswith("dbm"):
        return dbm_to_watts(float(t[:-3]))
    if t.lower().endswith("w"):
        t = t[:-1]
    return float(t)


def load_params(path: str | None) -> SystemParams:
    params = load_config(path) if path else default_params()
    return apply_env_overrides(params)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    return int(raw) if raw is not None else default


def header(params: SystemParams, args: dict, seed: int | None) -> dict:
    payload = json.dumps({"params": dataclasses.asdict(params), "args": args}, sort_keys=True)
    return {
        "config_sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "seed": seed,
        "version": __version__,
    }


def q0_grid(q_max: float, n_points: int) -> np.ndarray:
    if n_points < 2:
        raise ValueError("need at least 2 points")
    return np.linspace(0.0, q_max, n_points)


def cmd_tradeoff(params: SystemParams, schemes: Sequence[str], modulation: str, order: int,
                 n_points: int, recipe: str | None = None) -> list[optimize.TradeoffPoint]:
    """Tradeoff rows for one modulation or a named recipe; each curve on its own [0, q_max] grid."""
    if recipe is not None:
        if recipe not in RECIPES:
            raise ValueError(f"unknown recipe {recipe!r}; choose from {sorted(RECIPES)}")
        curves = [(params.replace(**over), mod, M) for over, mod, M in RECIPES[recipe]]
        schemes = ("PS", "TS")
    else:
        curves = [(params, modulation, order)]
    rows = []
    for p, mod, M in curves:
        c = build(mod, M)
        for scheme in schemes:
            scheme = scheme.upper()
            q_max = optimize.q_ps_max(p, c) if scheme == "PS" else optimize.q_ts_max(p)
            rows.extend(optimize.tradeoff_curve(p, c, scheme, q0_grid(q_max, n_points)))
    return rows


def _row(pt: optimize.TradeoffPoint) -> dict:
    return {
        "scheme": pt.scheme, "modulation": pt.modulation, "M": pt.order, "m": pt.m,
        "P_th_W": pt.p_th, "q0_W": pt.q0, "ssr_star": pt.ssr_star, "rho": pt.rho,
        "p_tx_W": pt.p_tx, "p_eh_W": pt.p_eh, "p_info_W": pt.p_info, "feasible": pt.feasible,
    }


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(rows: Sequence[dict], head: dict, fmt: str) -> str:
    if fmt == "json":
        data = {"header": head, "rows": [{k: _json_safe(v) for k, v in r.items()} for r in rows]}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    for key in sorted(head):
        buf.write(f"# {key}={head[key]}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def design_report(params: SystemParams, scheme: str, modulation: str, order: int, q0: float) -> dict:
    """Optimal design for one target, with constraint slacks; infeasible targets report q_max."""
    c = build(modulation, order)
    scheme = scheme.upper()
    try:
        if scheme == "PS":
            d = optimize.solve_p1(params, c, q0)
            return {"scheme": "PS", "modulation": c.name, "feasible": True, "q0_W": q0,
                    "rho_ps": d.rho_ps, "p_tx_W": d.p_tx, "achieved_q_W": d.achieved_q,
                    "achieved_ssr": d.achieved_ssr, "q_slack_W": d.achieved_q - q0,
                    "avg_power_slack_W": params.p_ave - d.p_tx,
                    "peak_slack_W": params.p_peak - c.papr * d.p_tx, "converged": d.converged}
        d = optimize.solve_p2(params, c, q0)
        return {"scheme": "TS", "modulation": c.name, "feasible": True, "q0_W": q0,
                "rho_ts": d.rho_ts, "p_eh_W": d.p_eh, "p_info_W": d.p_info,
                "achieved_q_W": d.achieved_q, "achieved_ssr": d.achieved_ssr,
                "q_slack_W": d.achieved_q - q0, "avg_power_slack_W": d.average_power_slack,
                "peak_slack_W": params.p_peak - c.papr * d.p_info, "peak_clamped": d.peak_clamped}
    except optimize.InfeasibleTarget as exc:
        return {"scheme": scheme, "modulation": c.name, "feasible": False, "q0_W": q0,
                "q_max_W": exc.q_max}


def simulate_report(params: SystemParams, scheme: str, modulation: str, order: int, q0: float,
                    cfg: SimConfig) -> dict:
    """Monte Carlo of the optimal design for ``q0`` next to its analytic metrics."""
    design = design_report(params, scheme, modulation, order, q0)
    if not design["feasible"]:
        return design
    c = build(modulation, order)
    if design["scheme"] == "PS":
        sim = simulate_ps(params, c, design["rho_ps"], design["p_tx_W"], cfg)
    else:
        signal = harvest.optimal_energy_signal(design["p_eh_W"], params.p_peak, params.eh_sensitivity)
        sim = simulate_ts(params, design["rho_ts"], design["p_eh_W"], design["p_info_W"], c, signal, cfg)
    design.update({"sim_" + k: v for k, v in dataclasses.asdict(sim).items()})
    return design


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI link-budget file (keys = SystemParams fields)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--mod", choices=("psk", "pam", "qam"), default="qam")
    common.add_argument("--order", type=int, default=16)

    p = argparse.ArgumentParser(prog="swipt", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tradeoff", parents=[common], help="optimal SSR vs required harvested power")
    t.add_argument("--scheme", choices=("ps", "ts", "both"), default="both")
    t.add_argument("--points", type=int, default=41)
    t.add_argument("--recipe", choices=sorted(RECIPES))

    o = sub.add_parser("optimize", parents=[common], help="optimal design for one target q0")
    o.add_argument("--scheme", choices=("ps", "ts"), required=True)
    o.add_argument("--q0", type=parse_power, required=True, help="watts, or dBm with a 'dBm' suffix")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo of the optimal design")
    s.add_argument("--scheme", choices=("ps", "ts"), required=True)
    s.add_argument("--q0", type=parse_power, required=True)
    s.add_argument("--blocks", type=int, default=10**5)
    s.add_argument("--symbols-per-block", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--stratified", action="store_true")

    v = sub.add_parser("validate", parents=[common], help="closed form vs Monte Carlo suites")
    v.add_argument("--suite", choices=checks.SUITES, default="all")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--workers", type=int, default=None)
    v.add_argument("--symbols", type=int, default=10**6)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _glue_q0(argv: Sequence[str]) -> list[str]:
    # "--q0 -30dBm" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for a in it:
        out.append(f"--q0={next(it, '')}" if a == "--q0" else a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_q0(sys.argv[1:] if argv is None else argv))
    try:
        params = load_params(args.config)
    except (ConfigError, ParamError) as exc:
        parser.exit(2, f"swipt: config error: {exc}\n")

    seed = getattr(args, "seed", None)
    seed = _env_int("SEED", 0) if seed is None else seed
    workers = getattr(args, "workers", None)
    workers = _env_int("WORKERS", 1) if workers is None else workers
    arg_record = {k: v for k, v in vars(args).items() if k not in ("out", "workers", "config")}

    if args.command == "tradeoff":
        schemes = ("PS", "TS") if args.scheme == "both" else (args.scheme.upper(),)
        rows = cmd_tradeoff(params, schemes, args.mod, args.order, args.points, args.recipe)
        _emit(render([_row(r) for r in rows], header(params, arg_record, None), args.format), args.out)
        return 0

    if args.command == "optimize":
        report = design_report(params, args.scheme, args.mod, args.order, args.q0)
        _emit(render_report(report, header(params, arg_record, None), args.format), args.out)
        return 0 if report["feasible"] else 1

    if args.command == "simulate":
        cfg = SimConfig(args.blocks, args.symbols_per_block, seed, workers, args.stratified)
        report = simulate_report(params, args.scheme, args.mod, args.order, args.q0, cfg)
        _emit(render_report(report, header(params, arg_record, seed), args.format), args.out)
        return 0 if report["feasible"] else 1

    text, ok = checks.run_suite(params, args.suite, seed, workers, args.symbols)
    _emit(text, args.out)
    return 0 if ok else 1


def render_report(report: dict, head: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"header": head, "report": report}, indent=2, sort_keys=True) + "\n"
    lines = [f"# {k}={head[k]}" for k in sorted(head)]
    lines += [f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}" for k, v in report.items()]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
