# Rate-energy tradeoff for 16-ary modulations under power splitting and time switching.
#
# Run:  python3 demos/01_tradeoff_curves.py
import numpy as np

from swipt import build, default_params, q_ps_max, q_ts_max, solve_p1, solve_p2

params = default_params()
print(params)

# Harvesting ceilings. PS sends everything to the harvester at rho = 1; TS
# transmits its whole energy budget at peak power, which lifts more of the
# received signal above the sensitivity floor.
for scheme in ("psk", "qam", "pam"):
    c = build(scheme, 16)
    print(f"{c.name:>7}: PAPR {c.papr:.3f}  q_ps_max {q_ps_max(params, c) * 1e6:.4f} uW")
print(f"     TS: q_ts_max {q_ts_max(params) * 1e6:.4f} uW (same for every modulation)")

# Sweep the harvested-power target and print the optimal success rate of each design.
c = build("qam", 16)
grid = np.linspace(0.0, q_ps_max(params, c), 9)
print("\n16-QAM   q0 [uW]   SSR PS    SSR TS")
for q0 in grid:
    ps = solve_p1(params, c, q0)
    ts = solve_p2(params, c, q0)
    gap = ps.achieved_ssr - ts.achieved_ssr
    better = "tie" if abs(gap) < 1e-12 else ("PS" if gap > 0 else "TS")
    print(f"       {q0 * 1e6:8.4f}   {ps.achieved_ssr:.4f}   {ts.achieved_ssr:.4f}   {better}")

# PS leads at low targets (it never gives up air time) and TS takes over near
# the PS ceiling. Remove the floor and both ceilings collapse to eta*P_ave/d^lambda.
flat = params.replace(eh_sensitivity=0.0)
print(f"\nno floor: q_ps_max {q_ps_max(flat, c):.6e} W, q_ts_max {q_ts_max(flat):.6e} W")

# Larger m means less fading variance, which lowers both ceilings.
for m in (1, 2, 5, 20):
    p = params.replace(fading_m=m)
    print(f"m={m:>2}: q_ps_max {q_ps_max(p, c) * 1e6:.4f} uW, q_ts_max {q_ts_max(p) * 1e6:.4f} uW")
