"""
Critical loops of the non-local action and their Morse index
=============================================================

The action B(x) = 2 ||x||^2 ||x'||^2 + 1/||x||^2 on non-vanishing loops has
one circle of critical points per mode k.  This script evaluates them,
assembles the Hessian as a dense matrix and counts negative eigenvalues.
"""

import numpy as np

from regfall import fourier_core as fc
from regfall import lagrangian as lag

# the first few critical loops and their action values
for k in range(1, 5):
    cp = lag.critical_point(k)
    print(f"k={k}  c_k={cp.c_k:.6f}  B(x_k)={lag.action_B(cp.x):.6f}  "
          f"closed form={lag.critical_value(k):.6f}  |grad B|={lag.grad_B(cp.x).max_abs_coeff():.1e}")

# Hessian spectrum at x_2, numeric vs closed form (in units of 4 pi^2)
k, N = 2, 8
numeric = lag.lag_spectrum_numeric(k, N)
print("\nnumeric spectrum / 4pi^2 at k=2, N=8:")
print([(round(e.value / (4 * np.pi ** 2), 9), e.multiplicity) for e in numeric])
print("closed form:")
print([(e.family, e.n, round(e.value / (4 * np.pi ** 2), 9), e.multiplicity)
       for e in lag.lag_spectrum(k, N)])

# the kernel is the time-shift direction sin 2 pi k tau
kernel = [e for e in numeric if abs(e.value) < lag.tol_zero(k)][0]
v = kernel.eigenvectors[0]
print("\nkernel eigenvector sin-coefficient of mode k:", round(abs(v.sin_coeffs[k - 1]), 12))

# Morse indices grow like 2k - 1
print("\nMorse indices:", [lag.morse_index(k, "numeric") for k in range(1, 11)])

# a second difference of B along a random direction against the Hessian form
rng = np.random.default_rng(0)
xi = fc.TrigPoly(rng.normal(), rng.normal(size=4), rng.normal(size=4))
xi = xi / np.sqrt(fc.norm_sq(xi))
cp, h = lag.critical_point(1), 1e-3
d2 = (lag.action_B(cp.x + h * xi) - 2 * lag.action_B(cp.x) + lag.action_B(cp.x - h * xi)) / h ** 2
print("second difference:", d2, " Hessian form:", fc.weighted_inner(cp.x, lag.hessian_apply(cp, xi), xi))
