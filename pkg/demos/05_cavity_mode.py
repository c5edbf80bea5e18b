"""Ring-cavity eigenmode: waist against curved-mirror separation.

The bow-tie ring has two curved mirrors around the crystal; the waist
between them is set by the separation, with stability windows on either
side.  Target here is about 21 um in the crystal.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sqzlab import CrystalSpec, StabilityError, cavity_waist

crystal = CrystalSpec(d_eff=15e-12, length=9.5e-3, lambda_fund=860e-9)

roc = 0.05  # 50 mm curved mirrors
round_trip = 0.5

separations = np.linspace(0.052, 0.068, 400)
waists = np.full_like(separations, np.nan)
for i, d in enumerate(separations):
    try:
        waists[i] = cavity_waist(roc, d, round_trip, crystal)
    except StabilityError:
        pass  # outside the stability window

stable = ~np.isnan(waists)
lo = separations[stable].min()
hi = separations[stable].max()
print(f"stability window: {lo*1e3:.1f} .. {hi*1e3:.1f} mm separation")

w_59 = cavity_waist(roc, 0.059, round_trip, crystal)
print(f"waist at 59 mm separation: {w_59*1e6:.1f} um")

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(separations * 1e3, waists * 1e6)
ax.axhline(21.0, color="gray", lw=0.8, ls=":")
ax.set_xlabel("curved-mirror separation [mm]")
ax.set_ylabel("crystal waist [um]")
fig.tight_layout()
fig.savefig("demos/05_cavity_mode.png", dpi=120)
print("wrote demos/05_cavity_mode.png")
