"""
CHSH value over the directions of particle b
============================================

Particle b flies off at 0.99c in some direction (theta, phi) of the pair's
rest frame.  The apparatus fields are the textbook CHSH choice, but particle
b's spin is measured along the field *in its own rest frame*, so the
violation depends on where it goes.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from relbell import TSIRELSON, ChshSettings, MomentumShell, chsh_s

settings = ChshSettings.standard()
shell = MomentumShell(speed_b=0.99)

theta = np.radians(np.arange(0, 181))[:, None]
phi = np.radians(np.arange(0, 361))[None, :]
S = chsh_s(settings, theta, phi, shell)

###############################################################################
# Along the z axis every apparatus field is perpendicular to the velocity, so
# the axes only get rescaled and the maximal value survives.  Near the
# equator the field component along the motion is left alone while the rest
# is stretched by gamma, which tilts the axes.

print("pole      :", S[0, 0], "(Tsirelson", TSIRELSON, ")")
print("equator   : min", S[90].min(), "max", S[90].max())
print("global min:", S.min())

fig, ax = plt.subplots(figsize=(6, 3.5))
im = ax.pcolormesh(np.degrees(phi.ravel()), np.degrees(theta.ravel()), S, shading="auto")
ax.set_xlabel("phi [deg]")
ax.set_ylabel("theta [deg]")
fig.colorbar(im, label="S")
fig.savefig("chsh_sphere.png", dpi=120, bbox_inches="tight")
