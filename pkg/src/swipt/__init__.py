"""Rate-energy analysis of SWIPT links with M-ary modulation and a harvester sensitivity floor."""

from .params import SystemParams, default_params, dbm_to_watts, watts_to_dbm, validate, load_config
from .modulation import Constellation, Scheme, build, papr, ser_conditional
from .channel import FadingModel
from .harvest import (
    EnergySignal,
    HarvestReport,
    avg_power_ps,
    avg_power_ts,
    jensen_lower_bound,
    optimal_energy_signal,
    psi,
)
from .decode import IdReport, aser, gaussian_tail, ssr_ps, ssr_ts
from .optimize import (
    InfeasibleTarget,
    PsDesign,
    TradeoffPoint,
    TsDesign,
    lambert_w0,
    q_ps_max,
    q_ts_max,
    solve_p1,
    solve_p2,
    tradeoff_curve,
)
from .montecarlo import SimConfig, SimResult, simulate_ps, simulate_ts

__version__ = "0.1.0"
