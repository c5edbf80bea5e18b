"""Noise budget of a measured squeezing level.

Starts from the ideal below-threshold spectrum, then charges each
imperfection in turn: escape efficiency, detection efficiency, phase
noise.  Ends with the apparatus-limit projection.
"""
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sqzlab import (
    DetectionChain,
    apply_phase_noise,
    load_config,
    predict_limit,
    quadrature_variance,
    squeezing_vs_pump,
    to_dB,
)

cfg = load_config()
opo, chain = cfg.opo, cfg.detection

pumps = np.round(np.arange(0.0, 0.351, 0.005), 12)
rows = squeezing_vs_pump(opo, chain, list(pumps))
sq = [r[1] for r in rows]
asq = [r[2] for r in rows]

best_row = min(rows, key=lambda r: r[1])
print(f"best squeezing in sweep: {best_row[1]:.2f} dB at {best_row[0]*1e3:.0f} mW")

# budget at a fixed operating point
pump = 0.2
x = math.sqrt(pump / opo.measured_threshold)
gamma = 2.99792458e8 * (opo.T + opo.loss.L0 + opo.loss.a * pump) / (2 * opo.round_trip)
ideal = quadrature_variance(x, chain.analysis_omega, gamma, 1.0)
rho = opo.T / (opo.T + opo.loss.L0 + opo.loss.a * pump)
after_escape = quadrature_variance(x, chain.analysis_omega, gamma, rho)
detected = quadrature_variance(
    x, chain.analysis_omega, gamma, rho * chain.eta_homodyne
)
observed = apply_phase_noise(detected, chain.phase_noise_deg)
print(f"at {pump*1e3:.0f} mW: ideal {to_dB(ideal.v_minus):.2f} dB"
      f" -> escape {to_dB(after_escape.v_minus):.2f}"
      f" -> detector {to_dB(detected.v_minus):.2f}"
      f" -> phase noise {to_dB(observed.v_minus):.2f} dB")

# what a cleaner cavity would buy
from sqzlab import LossModel, OpoConfig

upgraded = OpoConfig(
    T=opo.T,
    loss=LossModel(L0=0.001, a=0.0),
    enl=opo.enl,
    round_trip=opo.round_trip,
)
quiet = DetectionChain(
    eta_homodyne=chain.eta_homodyne,
    phase_noise_deg=0.3,
    analysis_omega=chain.analysis_omega,
)
grid = [round(0.001 * i, 12) for i in range(991)]
limit_db, limit_x = predict_limit(upgraded, quiet, grid)
print(f"projected limit with L0 = 0.001, no pump loss, 0.3 deg: "
      f"{limit_db:.2f} dB at x = {limit_x:.3f}")

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(pumps * 1e3, sq, label="squeezing")
ax.plot(pumps * 1e3, asq, label="antisqueezing")
ax.axhline(0.0, color="gray", lw=0.8)
ax.set_xlabel("pump power [mW]")
ax.set_ylabel("noise relative to shot noise [dB]")
ax.legend()
fig.tight_layout()
fig.savefig("demos/03_squeezing_budget.png", dpi=120)
print("wrote demos/03_squeezing_budget.png")
