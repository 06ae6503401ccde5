"""
Observers moving along z
========================

The pair's center of mass moves at beta along z through the laboratory.  The
apparatus fields (all perpendicular to z) become a magnetic plus an electric
field in the pair frame, and particle b sees both.  Cones are still drawn
in the pair frame, so every curve post-selects the same part of the state.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from relbell import AcceptanceCone, ChshSettings, FrameConfig, MomentumShell, averaged_s

settings = ChshSettings.standard()
shell = MomentumShell(0.99)
theta_prime = np.radians(np.linspace(1, 180, 60))

fig, ax = plt.subplots()
for beta in (0.0, 0.7, 0.9, 0.99):
    frame = FrameConfig.along_z(beta)
    curve = np.array([averaged_s(settings, shell, frame, AcceptanceCone(t)) for t in theta_prime])
    lost = np.degrees(theta_prime[curve < 2])
    note = f"below 2 from {lost[0]:.0f} deg" if lost.size else "violates everywhere"
    print(f"beta = {beta}: no post-selection S = {curve[-1]:.4f} ({note})")
    ax.plot(np.degrees(theta_prime), curve, label=f"beta = {beta}c")

ax.axhline(2, color="k", lw=0.5)
ax.set_xlabel("acceptance angle theta' (pair frame) [deg]")
ax.set_ylabel("S(theta')")
ax.legend()
fig.savefig("boosted_observer.png", dpi=120, bbox_inches="tight")
