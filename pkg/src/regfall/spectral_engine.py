"""Dense symmetric matrices in orthonormal trigonometric bases.

Operators on loops are assembled column by column: apply the operator to
every orthonormal basis element and read off the coordinates of the image.
Two layouts are used.

scalar, dimension 2N+1
    ``[1, sqrt2 cos 2 pi tau, sqrt2 sin 2 pi tau, ..., sqrt2 sin 2 pi N tau]``
pair, dimension 2(2N+1)
    ``[const xi, const eta, (cos_n xi, sin_n xi, cos_n eta, sin_n eta) for n = 1..N]``

so that a local operator is block diagonal per mode ``n`` and the
non-local terms of the free-fall Hessians show up as a bordered block at
``n = k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import LayoutMismatch, NoConvergence
from .fourier_core import TrigPoly

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class SpectrumEntry:
    """One eigenvalue with its multiplicity, winding and eigenvectors.

    ``eigenvectors`` holds loops: a :class:`TrigPoly` for scalar problems
    or a ``(xi, eta)`` pair for planar ones.
    """

    value: float
    multiplicity: int
    winding: int | None = None
    family: str = ""
    n: int | None = None
    eigenvectors: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        out = {"lambda": float(self.value), "mult": int(self.multiplicity),
               "label": self.family}
        if self.n is not None:
            out["n"] = int(self.n)
        if self.winding is not None:
            out["winding"] = int(self.winding)
        return out


class DenseSymmetric:
    """A real symmetric matrix, symmetrized on construction.

    ``asymmetry`` records ``max |M - M^T|`` of the input before
    symmetrization, so assembly defects stay visible.
    """

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        self.asymmetry = float(np.max(np.abs(a - a.T))) if a.size else 0.0
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.entries = a

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f"DenseSymmetric(dim={self.dim}, asymmetry={self.asymmetry:.3g})"


# -- eigensolvers ---------------------------------------------------------

def _jacobi(a: np.ndarray, max_sweeps: int, tol: float):
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return np.diag(a).copy(), v
    thresh = tol * scale
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = a[iu]
        if np.sqrt(2.0 * off @ off) <= thresh:
            break
        # sweep in fixed row-major order over pairs that are currently large
        big = np.abs(off) > thresh / n
        for p, q in zip(iu[0][big], iu[1][big]):
            apq = a[p, q]
            if abs(apq) <= thresh / n:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c * ap - s * aq
            a[q, :] = s * ap + c * aq
            a[p, q] = a[q, p] = 0.0
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
    else:
        off = a[iu]
        if np.sqrt(2.0 * off @ off) > thresh:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.diag(a).copy(), v


def eigensolve(M, method: str = "jacobi", max_sweeps: int = 60, tol: float = 1e-15):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns).

    ``method="jacobi"`` runs cyclic Jacobi rotations and is deterministic
    for identical input bits; ``method="lapack"`` defers to
    :func:`numpy.linalg.eigh`.
    """
    a = np.asarray(M.entries if isinstance(M, DenseSymmetric) else M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError("eigensolve needs a non-empty square matrix")
    if method == "lapack":
        w, v = np.linalg.eigh(a)
    elif method == "jacobi":
        w, v = _jacobi(a, max_sweeps, tol)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    # fix the sign of each eigenvector so the output is reproducible
    pivot = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[pivot, np.arange(v.shape[1])])
    return w, v


def cluster(eigenvalues, tol: float | Callable[[float], float] | None = None):
    """Group ascending eigenvalues by greedy chaining.

    Returns a list of ``(mean value, multiplicity, member indices)``.  The
    default tolerance is ``1e-7 * max(1, |lambda|)``.
    """
    vals = np.asarray(eigenvalues, dtype=float)
    if tol is None:
        def tol_at(v):
            return 1e-7 * max(1.0, abs(v))
    elif callable(tol):
        tol_at = tol
    else:
        def tol_at(v, _t=float(tol)):
            return _t
    groups: list[list[int]] = []
    for i, v in enumerate(vals):
        if groups and v - vals[groups[-1][-1]] <= tol_at(v):
            groups[-1].append(i)
        else:
            groups.append([i])
    return [(float(vals[g].mean()), len(g), g) for g in groups]


# -- layouts --------------------------------------------------------------

def scalar_dim(N: int) -> int:
    return 2 * N + 1


def pair_dim(N: int) -> int:
    return 2 * (2 * N + 1)


def loop_to_vector(f: TrigPoly, N: int) -> np.ndarray:
    """Orthonormal coordinates of ``f`` in the scalar layout (truncating)."""
    f = f.padded(N)
    v = np.empty(2 * N + 1)
    v[0] = f.constant
    v[1::2] = f.cos_coeffs / SQRT2
    v[2::2] = f.sin_coeffs / SQRT2
    return v


def vector_to_loop(v) -> TrigPoly:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size % 2 != 1:
        raise LayoutMismatch(f"scalar layout needs odd length 2N+1, got {v.size}")
    return TrigPoly(v[0], SQRT2 * v[1::2], SQRT2 * v[2::2])


def loops_to_vector(xi: TrigPoly, eta: TrigPoly, N: int) -> np.ndarray:
    """Orthonormal coordinates of the pair ``(xi, eta)`` in the pair layout."""
    xi, eta = xi.padded(N), eta.padded(N)
    v = np.empty(2 * (2 * N + 1))
    v[0], v[1] = xi.constant, eta.constant
    blocks = v[2:].reshape(N, 4)
    blocks[:, 0] = xi.cos_coeffs / SQRT2
    blocks[:, 1] = xi.sin_coeffs / SQRT2
    blocks[:, 2] = eta.cos_coeffs / SQRT2
    blocks[:, 3] = eta.sin_coeffs / SQRT2
    return v


def vector_to_loops(v, layout: str = "pair"):
    """Split a coordinate vector back into loops.

    ``layout="pair"`` returns ``(xi, eta)``; ``layout="scalar"`` returns a
    single :class:`TrigPoly`.
    """
    v = np.asarray(v, dtype=float)
    if layout == "scalar":
        return vector_to_loop(v)
    if layout != "pair":
        raise LayoutMismatch(f"unknown layout {layout!r}")
    if v.ndim != 1 or v.size < 2 or (v.size - 2) % 4 != 0:
        raise LayoutMismatch(f"pair layout needs length 2(2N+1), got {v.size}")
    blocks = v[2:].reshape(-1, 4)
    xi = TrigPoly(v[0], SQRT2 * blocks[:, 0], SQRT2 * blocks[:, 1])
    eta = TrigPoly(v[1], SQRT2 * blocks[:, 2], SQRT2 * blocks[:, 3])
    return xi, eta


def assemble_scalar(op: Callable[[TrigPoly], TrigPoly], N: int) -> DenseSymmetric:
    """Galerkin matrix of a loop operator in the scalar layout."""
    dim = scalar_dim(N)
    cols = np.empty((dim, dim))
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        cols[:, j] = loop_to_vector(op(vector_to_loop(e)), N)
    return DenseSymmetric(cols)


def assemble_pair(op, N: int) -> DenseSymmetric:
    """Galerkin matrix of an operator ``(xi, eta) -> (xi', eta')``."""
    dim = pair_dim(N)
    cols = np.empty((dim, dim))
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        cols[:, j] = loops_to_vector(*op(*vector_to_loops(e)), N)
    return DenseSymmetric(cols)
