"""
Restoring maximal violation
===========================

For a single known velocity of particle b the loss is not fundamental: the
lab fields can be re-aimed.  Two ways to find them are shown here.
"""

import numpy as np

from relbell import (
    AcceptanceCone,
    ChshSettings,
    FrameConfig,
    MomentumShell,
    averaged_s,
    chsh_s_velocity,
    optimize_directions,
    quantization_axis,
    solve_compensating_field,
)

x, y, z = np.eye(3)
v = np.array([0.99, 0.0, 0.0])
standard = ChshSettings.standard()
print("standard fields, v along x:", chsh_s_velocity(standard, v))

###############################################################################
# Search: Nelder-Mead over the four angles of the b fields, restarted from
# seeded random points until a full round stops improving.

res = optimize_directions(x, y, v)
print("optimized:", res.best_s, "converged:", res.converged)
print("  b1 =", np.round(res.best_b1, 6), " b2 =", np.round(res.best_b2, 6))

###############################################################################
# Exact inversion: the lab -> rest-frame field map is linear, so the fields
# whose rest-frame images are the ideal diagonals follow from a 3x3 solve.
# Here the pair also moves at 0.9c along z relative to the lab.

frame = FrameConfig.along_z(0.9)
r = 1 / np.sqrt(2)
for target in (np.array([r, r, 0.0]), np.array([r, -r, 0.0])):
    b = solve_compensating_field(target, v, frame)
    axis = quantization_axis(b, v, frame, general=True)
    print("target", target, "-> lab field", np.round(b, 6), "residual", np.linalg.norm(axis - target))

###############################################################################
# Each momentum needs its own compensation, so a cone of directions cannot
# be fixed this way.  For a cone around z the symmetric standard fields turn
# out to be the best single choice already.

cone = AcceptanceCone(np.pi / 4)
best = optimize_directions(x, y, 0.99 * z, cone=cone, max_iter=3)
print("cone 45 deg: standard", averaged_s(standard, MomentumShell(0.99), cone=cone),
      "optimized", best.best_s)
