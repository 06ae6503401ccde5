"""
Averaging over an acceptance cone
=================================

A detector accepting every particle b whose direction lies within theta'
of the z axis records the average of S over that cap.  Faster particles
lose more of the violation.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from relbell import AcceptanceCone, ChshSettings, MomentumShell, QuadratureSpec, averaged_s

settings = ChshSettings.standard()
theta_prime = np.radians(np.linspace(1, 180, 60))

fig, ax = plt.subplots()
for speed in (0.5, 0.9, 0.99, 0.9999):
    shell = MomentumShell(speed)
    curve = [averaged_s(settings, shell, cone=AcceptanceCone(t)) for t in theta_prime]
    print(f"v_b = {speed}: S(10 deg) = {curve[5]:.6f}, S(180 deg) = {curve[-1]:.6f}")
    ax.plot(np.degrees(theta_prime), curve, label=f"v_b = {speed}c")

###############################################################################
# The quadrature resolution is picked from the particle speed: near 0.9999c
# (gamma ~ 71) the integrand has features about 1/gamma wide, so the default
# 128 x 256 rule is refined automatically.

print(QuadratureSpec.for_speed(0.99), QuadratureSpec.for_speed(0.9999))

###############################################################################
# Without a boost S(theta) equals S(pi - theta), so a cone wider than a
# hemisphere adds back directions with larger S and the curves turn up again.

ax.axhline(2, color="k", lw=0.5)
ax.set_xlabel("acceptance angle theta' [deg]")
ax.set_ylabel("S(theta')")
ax.legend()
fig.savefig("cone_average.png", dpi=120, bbox_inches="tight")
