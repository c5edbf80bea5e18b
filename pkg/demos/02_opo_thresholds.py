"""OPO design trade-off: output coupler vs threshold vs escape efficiency.

The pump bleaches extra loss into the cavity (absorption grows with blue
power), so the threshold is a fixed point and the best coupler moves.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sqzlab import (
    EffectiveNonlinearity,
    LossModel,
    escape_efficiency,
    loss_at_pump,
    optimize_coupler,
    oscillation_threshold,
    pump_power_at_x,
)

loss = LossModel(L0=0.01236, a=0.0246)
enl = EffectiveNonlinearity(0.043)

print(f"passive loss L0 = {loss.L0:.4f}, pump slope a = {loss.a:.4f} /W")
print(f"L at 0.2 W pump: {loss_at_pump(loss, 0.2):.4f}")

couplers = np.arange(0.05, 0.4001, 0.005)
p_th = np.array([oscillation_threshold(t, enl, loss) for t in couplers])

# escape efficiency at three drive strengths; the x = 1 curve pays the
# full pump-induced loss penalty
rho = {}
for x in (0.0, 0.7, 1.0):
    rho[x] = [
        escape_efficiency(t, pump_power_at_x(x, t, enl, loss), loss)
        for t in couplers
    ]

t_opt, rho_opt = optimize_coupler(1.0, enl, loss, (0.05, 0.4))
print(f"coupler optimum at threshold drive: T = {t_opt:.3f}, rho = {rho_opt:.4f}")
print(f"thresholds: T=0.113 -> {oscillation_threshold(0.113, enl, loss)*1e3:.1f} mW, "
      f"T=0.21 -> {oscillation_threshold(0.21, enl, loss)*1e3:.1f} mW")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.plot(couplers, p_th * 1e3)
ax1.set_xlabel("output coupler T")
ax1.set_ylabel("threshold [mW]")
for x, curve in rho.items():
    ax2.plot(couplers, curve, label=f"x = {x}")
ax2.axvline(t_opt, color="gray", lw=0.8, ls=":")
ax2.set_xlabel("output coupler T")
ax2.set_ylabel("escape efficiency rho")
ax2.legend()
fig.tight_layout()
fig.savefig("demos/02_opo_thresholds.png", dpi=120)
print("wrote demos/02_opo_thresholds.png")
