"""
Conley-Zehnder index of a path of symmetric matrices
====================================================

For S(t) symmetric the operator -J0 zeta' - S zeta has real spectrum and
every eigenvector winds a definite number of times around the origin.
The winding of the largest negative eigenvalue gives the index.
"""

import numpy as np

from regfall import cz_local as cz
from regfall.verify import random_symmetric_path

# constant paths: the spectrum of S = 0 shifted by -s
for s in (0.5, -0.5, 7.0):
    S = cz.SymmetricPath.constant(s * np.eye(2))
    print(f"S = {s} Id -> (alpha, parity, CZ) = {cz.cz_of_path(S, 16)}")

# a random smooth path, checked against the shooting method
S = random_symmetric_path(np.random.default_rng(0))
entries = cz.spectrum_with_winding(S, 16, window=(-12.0, 12.0))
roots = cz.shooting_eigenvalues(S, (-12.0, 12.0))
print("\ngalerkin                shooting        winding")
shots = [r for r, m in roots for _ in range(m)]
gal = [(e.value, e.winding) for e in entries for _ in range(e.multiplicity)]
for (g, w), r in zip(gal, shots):
    print(f"{g:14.9f}  {r:14.9f}  {w:>6}")
print("index:", cz.cz_of_path(S, 16))

# switching S on gradually moves the eigenvalues but keeps each winding
branches, rs = cz.track_homotopy(S, 16, window=(-15.0, 15.0))
for ell in (-1, 0, 1):
    print(f"winding {ell}:", [np.round(v, 3).tolist() for v in branches[ell][::5]])
