# Why the time-switching transmitter sends its energy signal in on-off bursts.
#
# Run:  python3 demos/03_energy_signal.py
import numpy as np

from swipt import default_params
from swipt.harvest import EnergySignal, optimal_energy_signal, random_energy_signal, solve_pa_bruteforce

params = default_params()
v = 1.0 / params.path_loss  # one fading realisation at unit gain
p_th = params.eh_sensitivity
p_e = 12e-3  # average power reserved for the transfer phase

# A constant 12 mW signal lands at 12 uW, barely above the 10 uW floor.
flat = EnergySignal(((p_e, 1.0),))
# Bursting at the 30 mW peak for 40% of the phase keeps the same average energy.
burst = optimal_energy_signal(p_e, params.p_peak)
print(f"constant : {flat.harvest_rate(v, p_th) * 1e6:.3f} uW above floor")
print(f"on-off   : {burst.harvest_rate(v, p_th) * 1e6:.3f} uW above floor")

# Exhaustive search over two-level signals lands on the same burst.
best = solve_pa_bruteforce(p_e, params.p_peak, p_th, v, grid_resolution=200)
print(f"brute force picks {best.levels}")

# Random five-level signals with the same mean never do better.
rng = np.random.default_rng(0)
rates = [random_energy_signal(rng, p_e, params.p_peak, 5).harvest_rate(v, p_th) for _ in range(1000)]
print(f"best of 1000 random 5-level signals: {max(rates) * 1e6:.3f} uW")

# Below the floor the gap is starker: a 5 mW constant signal harvests nothing.
low = optimal_energy_signal(5e-3, params.p_peak)
print(f"\n5 mW constant: {EnergySignal(((5e-3, 1.0),)).harvest_rate(v, p_th) * 1e6:.3f} uW, "
      f"5 mW on-off: {low.harvest_rate(v, p_th) * 1e6:.3f} uW")
