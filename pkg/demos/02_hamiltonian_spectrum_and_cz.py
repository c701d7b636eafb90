"""
Hamiltonian spectrum, winding numbers and the Conley-Zehnder index
==================================================================

At the critical pair (x_k, y_k) the linearized delay equations give a
self-adjoint operator with eigenvalues in closed form.  Each eigenvector is
a planar loop with a winding number; the index is read off from them.
"""

from regfall import hamiltonian as ham
from regfall import lagrangian as lag

k = 2
cp = ham.critical_point_ham(k)
print(f"k={k}: ||y||^2={cp.to_json()['norm_y_sq']:.12f}, sqrt(ab)={(cp.a * cp.b) ** 0.5:.12f}")
print("A_H(x_k, y_k) =", ham.action_AH(cp), " B(x_k) =", lag.critical_value(k))

# closed form and numeric eigenvalues side by side, with windings
closed = ham.ham_spectrum_closed(k, 4 * k)
numeric = ham.ham_spectrum_numeric(k, 4 * k)
print(f"\n{'family':>18} {'n':>3} {'closed':>14} {'numeric':>14} {'w':>4} {'m':>2}")
for a, b in zip(closed, numeric):
    print(f"{a.family:>18} {a.n:>3} {a.value:14.8f} {b.value:14.8f} {b.winding:>4} {b.multiplicity:>2}")

# the index: the kernel eigenvalue lambda_k^- = 0 and lambda_hat_k^- share winding -k
for k in range(1, 6):
    rep = ham.cz_index(k, "numeric")
    print(rep.to_json())

# no collisions between the families
print("\nfamily gaps:", [round(ham.disjointness_gap(k, 10 * k), 4) for k in range(1, 6)])
