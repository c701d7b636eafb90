"""
From regularized loops to free-fall trajectories
================================================

Squaring a loop and reparametrizing by classical time gives a trajectory
of q'' = -1/q^2 that bounces off the origin at the zeros of the loop.
"""

import numpy as np

from regfall import fourier_core as fc
from regfall import lagrangian as lag
from regfall import regularization as reg

cp = lag.critical_point(1)
orbit = reg.rescale_square(cp.x, M=16)
print(orbit.to_csv())
print("collision times:", orbit.collision_times)

for k in range(1, 6):
    print(f"k={k}: residual {reg.physical_residual(lag.critical_point(k)):.2e}, "
          f"energy drift {reg.energy_drift(lag.critical_point(k)):.2e}")

# the mean of 1/q is 1/||x||^2 even with collisions
r = reg.mean_inverse_check(cp.x)
print("\nint dt/q:", r["t_form"], " 1/||x||^2:", r["tau_form"])

# collision-free loops go back and forth without loss
x = 1.0 + 0.3 * fc.TrigPoly.cos_mode(1) - 0.1 * fc.TrigPoly.sin_mode(3)
back = reg.inverse_Q(reg.rescale_square(x, 2048), N=8)
print("Q(R(x)) - x:", np.max(np.abs(back.coeff_vector() - x.padded(8).coeff_vector())))
