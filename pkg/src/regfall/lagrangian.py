"""The non-local Lagrangian action of the regularized free fall.

    B(x) = 2 ||x||^2 ||x'||^2 + 1 / ||x||^2

on non-vanishing loops ``x``, its gradient for the metric
``<.,.>_x = 4 ||x||^2 <.,.>``, the critical circles ``x_k = c_k cos 2 pi k tau``
and the Hessian spectrum at them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier_core as fc
from . import spectral_engine as se
from .errors import BadMode, BadRange, TruncationTooSmall
from .fourier_core import TrigPoly

PI = np.pi


def _check_mode(k) -> int:
    if int(k) != k or k < 1:
        raise BadMode(f"mode k must be a positive integer, got {k!r}")
    return int(k)


def c_k(k: int) -> float:
    """Amplitude of the k-th critical loop, ``2^(-1/6) (pi k)^(-1/3)``."""
    k = _check_mode(k)
    return 2.0 ** (-1.0 / 6.0) * (PI * k) ** (-1.0 / 3.0)


@dataclass(frozen=True)
class LagCritical:
    """The critical point ``x_k(tau) = c_k cos 2 pi k (tau + sigma)``."""

    k: int
    c_k: float
    x: TrigPoly
    alpha: float
    norm_x_sq: float
    norm_dx_sq: float
    sigma: float = 0.0

    def to_json(self) -> dict:
        return {"k": self.k, "c_k": self.c_k, "sigma": self.sigma,
                "alpha": self.alpha, "norm_x_sq": self.norm_x_sq,
                "norm_dx_sq": self.norm_dx_sq, "x": self.x.to_json()}


def _norms(x: TrigPoly):
    nx = fc._loop_norm_sq(x)
    return nx, fc.norm_sq(fc.derivative(x))


def action_B(x: TrigPoly) -> float:
    nx, ndx = _norms(x)
    return 2.0 * nx * ndx + 1.0 / nx


def alpha_coeff(x: TrigPoly) -> float:
    """``||x'||^2/||x||^2 - 1/(2 ||x||^6)``, the coefficient in ``x'' = alpha x``."""
    nx, ndx = _norms(x)
    return ndx / nx - 0.5 / nx ** 3


def diff_B(x: TrigPoly, xi: TrigPoly) -> float:
    """Directional derivative ``dB(x) xi``."""
    nx, ndx = _norms(x)
    x_xi = fc.inner(x, xi)
    return 4.0 * x_xi * ndx + 4.0 * nx * fc.inner(fc.derivative(x), fc.derivative(xi)) \
        - 2.0 * x_xi / nx ** 2


def grad_B(x: TrigPoly) -> TrigPoly:
    """Gradient for the metric ``<.,.>_x``: ``-x'' + alpha x``."""
    return -fc.second_derivative(x) + alpha_coeff(x) * x


def critical_point(k: int, sigma: float = 0.0) -> LagCritical:
    """The critical loop of mode ``k``, optionally shifted by ``sigma``.

    With ``sigma = 0`` the loop is maximal at ``tau = 0``.
    """
    k = _check_mode(k)
    ck = c_k(k)
    x = TrigPoly.cos_mode(k, ck).shifted(sigma)
    w2 = (2.0 * PI * k) ** 2
    return LagCritical(k=k, c_k=ck, x=x, alpha=-w2, norm_x_sq=0.5 * ck * ck,
                       norm_dx_sq=0.5 * w2 * ck * ck, sigma=float(sigma))


def critical_value(k: int) -> float:
    k = _check_mode(k)
    return 3.0 * 2.0 ** (1.0 / 3.0) * (PI * k) ** (2.0 / 3.0)


def hessian_apply(cp: LagCritical, xi: TrigPoly) -> TrigPoly:
    """Hessian of ``B`` at ``x_k`` (metric ``<.,.>_x``) applied to ``xi``.

    ``-xi'' - (2 pi k)^2 xi + 12 (2 pi k)^2 xi_k cos 2 pi k tau``, where
    ``xi_k`` is the coefficient of ``xi`` along the critical direction.
    """
    w2 = (2.0 * PI * cp.k) ** 2
    # unit loop along x_k; equals cos 2 pi k tau when sigma = 0
    e = cp.x / cp.c_k
    xi_k = 2.0 * fc.inner(e, xi)
    return -fc.second_derivative(xi) - w2 * xi + 12.0 * w2 * xi_k * e


def hessian_general(x: TrigPoly, xi: TrigPoly) -> TrigPoly:
    """Hessian operator at a critical loop ``x`` from the unsimplified formula.

    ``-xi'' + alpha xi - 2/||x||^2 (2 alpha - 1/||x||^6) <x, xi> x``.
    Used for numeric assembly so it stays independent of the closed form.
    """
    nx = fc._loop_norm_sq(x)
    a = alpha_coeff(x)
    return -fc.second_derivative(xi) + a * xi \
        - (2.0 / nx) * (2.0 * a - 1.0 / nx ** 3) * fc.inner(x, xi) * x


def hessian_matrix(k: int, N: int, sigma: float = 0.0) -> se.DenseSymmetric:
    """Dense Hessian matrix at ``x_k`` in the scalar layout of dimension 2N+1."""
    k = _check_mode(k)
    if N < k:
        raise TruncationTooSmall(f"N={N} cannot resolve mode k={k}")
    x = critical_point(k, sigma).x.padded(N)
    return se.assemble_scalar(lambda xi: hessian_general(x, xi), N)


def tol_zero(k: int) -> float:
    return 1e-9 * (2.0 * PI * k) ** 2


def lag_spectrum(k: int, n_max: int) -> list[se.SpectrumEntry]:
    """Closed-form Hessian spectrum at ``x_k`` for modes up to ``n_max``, ascending."""
    k = _check_mode(k)
    if n_max < k:
        raise BadRange(f"n_max={n_max} must be >= k={k}")
    four_pi2 = 4.0 * PI * PI
    entries = [
        se.SpectrumEntry(-four_pi2 * k * k, 1, family="mu_0", n=0,
                         eigenvectors=(TrigPoly.const(1.0),)),
        se.SpectrumEntry(0.0, 1, family="mu_k", n=k,
                         eigenvectors=(TrigPoly.sin_mode(k),)),
        se.SpectrumEntry(12.0 * (2.0 * PI * k) ** 2, 1, family="mu_hat_k", n=k,
                         eigenvectors=(TrigPoly.cos_mode(k),)),
    ]
    for n in range(1, n_max + 1):
        if n == k:
            continue
        entries.append(se.SpectrumEntry(
            four_pi2 * (n * n - k * k), 2, family="mu_n", n=n,
            eigenvectors=(TrigPoly.cos_mode(n), TrigPoly.sin_mode(n))))
    return sorted(entries, key=lambda e: e.value)


def lag_spectrum_numeric(k: int, N: int, method: str = "jacobi") -> list[se.SpectrumEntry]:
    """Clustered eigenvalues of the assembled Hessian matrix."""
    w, v = se.eigensolve(hessian_matrix(k, N), method=method)
    out = []
    for val, mult, idx in se.cluster(w):
        vecs = tuple(se.vector_to_loop(v[:, i]) for i in idx)
        out.append(se.SpectrumEntry(val, mult, family="numeric", eigenvectors=vecs))
    return out


def morse_index(k: int, mode: str = "closed_form", N: int | None = None,
                method: str = "jacobi") -> int:
    """Number of negative Hessian eigenvalues at ``x_k``; ``2k - 1`` in closed form."""
    k = _check_mode(k)
    if mode == "closed_form":
        return 2 * k - 1
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    N = max(16, 4 * k) if N is None else N
    if N < 2 * k:
        raise TruncationTooSmall(f"numeric Morse index needs N >= 2k, got N={N}, k={k}")
    w, _ = se.eigensolve(hessian_matrix(k, N), method=method)
    return int(np.sum(w < -tol_zero(k)))
