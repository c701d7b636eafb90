"""Spectral tools for the regularized one-dimensional free fall.

Submodules
----------
fourier_core
    Real trigonometric polynomials on the circle.
lagrangian
    The non-local action ``B``, its critical loops and Hessian spectrum.
regularization
    Time rescaling between regularized loops and physical trajectories.
hamiltonian
    The Hamiltonian action, its Hessian spectrum and Conley-Zehnder index.
cz_local
    Conley-Zehnder indices of paths of symmetric 2x2 matrices.
spectral_engine
    Dense symmetric assembly, eigensolver and clustering.
"""

from . import cz_local, fourier_core, hamiltonian, lagrangian, regularization, spectral_engine
from .errors import RegFallError
from .fourier_core import TrigPoly

__all__ = ["TrigPoly", "RegFallError", "cz_local", "fourier_core", "hamiltonian",
           "lagrangian", "regularization", "spectral_engine"]
__version__ = "0.1.0"
