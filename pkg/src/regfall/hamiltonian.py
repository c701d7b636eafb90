"""The non-local Hamiltonian side of the regularized free fall.

Phase loops ``(x, y)`` carry the Hamiltonian

    H(x, y) = (||y||^2 / 2 - 4) / (4 ||x||^2)

and the action ``A_H(x, y) = <y, x'> - H(x, y)``.  Its critical points are
the solutions of the delay Hamilton equations

    x' = y / (4 ||x||^2),    y' = x (||y||^2 / 4 - 2) / ||x||^4

and correspond to the Lagrangian critical loops through ``y = 4 ||x||^2 x'``.
At ``(x_k, y_k)`` the linearization is the operator
``L zeta = -J0 zeta' - S zeta`` with a non-local symmetric ``S``, whose
spectrum, eigenvector windings and Conley-Zehnder index are computed here.
All inner products are plain L^2 on [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cz_local
from . import fourier_core as fc
from . import lagrangian as lag
from . import spectral_engine as se
from .errors import BadRange, TruncationTooSmall
from .fourier_core import TrigPoly

PI = np.pi


@dataclass(frozen=True)
class PhaseLoop:
    """A pair of loops ``(x, y)``; ``x`` must not vanish identically."""

    x: TrigPoly
    y: TrigPoly

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, data) -> "PhaseLoop":
        return cls(TrigPoly.from_json(data["x"]), TrigPoly.from_json(data["y"]))


@dataclass(frozen=True)
class HamCritical:
    """The critical pair ``x_k = c_k cos 2 pi k tau``, ``y_k = -2 c_k^3 (2 pi k) sin 2 pi k tau``.

    ``a = 1/(4 ||x||^2)`` and ``b = (2 - ||y||^2/4) / ||x||^4`` satisfy
    ``sqrt(a b) = 2 pi k``.
    """

    k: int
    c_k: float
    x: TrigPoly
    y: TrigPoly
    a: float
    b: float

    @property
    def phase(self) -> PhaseLoop:
        return PhaseLoop(self.x, self.y)

    def to_json(self) -> dict:
        return {"k": self.k, "c_k": self.c_k, "a": self.a, "b": self.b,
                "norm_x_sq": fc.norm_sq(self.x), "norm_y_sq": fc.norm_sq(self.y),
                "x": self.x.to_json(), "y": self.y.to_json()}


@dataclass(frozen=True)
class IndexReport:
    """Conley-Zehnder data at ``(x_k, y_k)`` next to the Morse index of ``x_k``."""

    k: int
    alpha_S: int
    parity: int
    cz: int
    cz_can: int
    morse: int

    @property
    def consistent(self) -> bool:
        return (self.cz == 2 * self.alpha_S + self.parity and self.cz_can == -self.cz
                and self.cz_can == self.morse)

    def to_json(self) -> dict:
        return {"k": self.k, "alpha": self.alpha_S, "parity": self.parity,
                "cz": self.cz, "cz_can": self.cz_can, "morse": self.morse}


def _xy(p):
    if isinstance(p, HamCritical):
        return p.x, p.y
    return p.x, p.y


# -- action and equations -------------------------------------------------

def hamiltonian_H(p) -> float:
    x, y = _xy(p)
    nx = fc._loop_norm_sq(x)
    return (0.5 * fc.norm_sq(y) - 4.0) / (4.0 * nx)


def action_AH(p) -> float:
    x, y = _xy(p)
    return fc.inner(y, fc.derivative(x)) - hamiltonian_H(p)


def diff_AH(p, xi: TrigPoly, eta: TrigPoly) -> float:
    """Directional derivative ``dA_H(x, y)(xi, eta)``."""
    x, y = _xy(p)
    nx = fc._loop_norm_sq(x)
    ny = fc.norm_sq(y)
    d_eta = fc.inner(fc.derivative(x) - y / (4.0 * nx), eta)
    d_xi = fc.inner(-fc.derivative(y) + ((0.25 * ny - 2.0) / nx ** 2) * x, xi)
    return d_eta + d_xi


def hamilton_residual(p) -> tuple[float, float]:
    """L^2 norms of the defects in the two delay Hamilton equations."""
    x, y = _xy(p)
    nx = fc._loop_norm_sq(x)
    ny = fc.norm_sq(y)
    r1 = fc.derivative(x) - y / (4.0 * nx)
    r2 = fc.derivative(y) - ((0.25 * ny - 2.0) / nx ** 2) * x
    return float(np.sqrt(fc.norm_sq(r1))), float(np.sqrt(fc.norm_sq(r2)))


def legendre_fiber(x: TrigPoly) -> TrigPoly:
    """``y_x = 4 ||x||^2 x'``."""
    return (4.0 * fc._loop_norm_sq(x)) * fc.derivative(x)


def domination_gap(p) -> float:
    """``||4 ||x||^2 x' - y||^2 / (8 ||x||^2) = B(x) - A_H(x, y) >= 0``."""
    x, y = _xy(p)
    nx = fc._loop_norm_sq(x)
    d = legendre_fiber(x) - y
    return 0.5 * fc.norm_sq(d) / (4.0 * nx)


def U_map(x: TrigPoly, xi: TrigPoly) -> float:
    """``U(x, xi) = <xi, xi>_x / 2 = 2 ||x||^2 ||xi||^2``."""
    return 0.5 * fc.weighted_inner(x, xi, xi)


U_star = domination_gap


def L_map(x: TrigPoly, xi: TrigPoly) -> PhaseLoop:
    """Fiber derivative ``(x, xi) -> (x, 4 ||x||^2 (x' + xi))``."""
    nx = fc._loop_norm_sq(x)
    return PhaseLoop(x, (4.0 * nx) * (fc.derivative(x) + xi))


def L_inverse(p) -> tuple[TrigPoly, TrigPoly]:
    x, y = _xy(p)
    nx = fc._loop_norm_sq(x)
    return x, y / (4.0 * nx) - fc.derivative(x)


# -- critical points ------------------------------------------------------

def critical_point_ham(k: int) -> HamCritical:
    k = lag._check_mode(k)
    ck = lag.c_k(k)
    w = 2.0 * PI * k
    x = TrigPoly.cos_mode(k, ck)
    y = TrigPoly.sin_mode(k, -2.0 * ck ** 3 * w)
    nx, ny = fc.norm_sq(x), fc.norm_sq(y)
    return HamCritical(k=k, c_k=ck, x=x, y=y, a=1.0 / (4.0 * nx),
                       b=(2.0 - 0.25 * ny) / nx ** 2)


def S_apply(p, xi: TrigPoly, eta: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    """The symmetric operator ``S`` in ``zeta' = J0 S zeta``, the linearized equations."""
    x, y = _xy(p)
    nx = fc._loop_norm_sq(x)
    ny = fc.norm_sq(y)
    x_xi, y_eta = fc.inner(x, xi), fc.inner(y, eta)
    s1 = (0.25 * ny - 2.0) * (xi / nx ** 2 - (4.0 * x_xi / nx ** 3) * x) \
        + (0.5 * y_eta / nx ** 2) * x
    s2 = (0.5 * x_xi / nx ** 2) * y - eta / (4.0 * nx)
    return s1, s2


def hessian_apply(p, xi: TrigPoly, eta: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    """``-J0 zeta' - S zeta``; this is minus the L^2 Hessian of ``A_H``."""
    s1, s2 = S_apply(p, xi, eta)
    return fc.derivative(eta) - s1, -fc.derivative(xi) - s2


def ham_hessian_matrix(k: int, N: int) -> se.DenseSymmetric:
    """The operator ``-J0 zeta' - S zeta`` at ``(x_k, y_k)`` in the pair layout."""
    cp = critical_point_ham(k)
    if N < cp.k:
        raise TruncationTooSmall(f"N={N} cannot resolve mode k={cp.k}")
    p = PhaseLoop(cp.x.padded(N), cp.y.padded(N))

    def op(xi, eta):
        a, b = hessian_apply(p, xi, eta)
        return a.padded(N), b.padded(N)

    return se.assemble_pair(op, N)


# -- closed-form spectrum -------------------------------------------------

def _unit(xi: TrigPoly, eta: TrigPoly):
    r = np.sqrt(fc.norm_sq(xi) + fc.norm_sq(eta))
    return xi / r, eta / r


def _branch_coeffs(k: int):
    c = lag.c_k(k)
    beta = 4.0 / c ** 4 + 0.5 / c ** 2
    Bk = 0.5 / c ** 2 - 12.0 / c ** 4
    Ck = -48.0 * PI * PI * k * k
    return c, beta, Bk, Ck


def lambda_branches(k: int, n):
    """``(lambda_n^-, lambda_n^+)``, roots of ``(l - 1/2c^2)(l - 4/c^4) = 4 pi^2 n^2``."""
    _, beta, _, _ = _branch_coeffs(k)
    n = np.asarray(n, dtype=float)
    gamma = 4.0 * PI * PI * (k * k - n * n)
    root = np.sqrt(beta * beta - 4.0 * gamma)
    lo = 0.5 * (beta - root)
    # the small root by Vieta, avoiding cancellation
    lo = np.where(beta > 0, gamma / (0.5 * (beta + root)), lo)
    return lo, 0.5 * (beta + root)


def lambda_hat(k: int):
    """``(lambda_hat_k^-, lambda_hat_k^+)``, roots of ``(l - 1/2c^2)(l + 12/c^4) = 36 pi^2 k^2``."""
    _, _, Bk, Ck = _branch_coeffs(k)
    root = np.sqrt(Bk * Bk - 4.0 * Ck)
    lo = 0.5 * (Bk - root)
    return float(lo), float(Ck / lo)


def ham_spectrum_closed(k: int, n_max: int) -> list[se.SpectrumEntry]:
    """Closed-form spectrum at ``(x_k, y_k)`` for Fourier modes ``0..n_max``, ascending.

    Each entry carries its winding and normalized closed-form eigenvectors.
    """
    k = lag._check_mode(k)
    if n_max < k:
        raise BadRange(f"n_max={n_max} must be >= k={k}")
    c, beta, _, _ = _branch_coeffs(k)
    h = 0.5 / c ** 2
    entries = []
    l0m, l0p = lambda_branches(k, 0)
    entries.append(se.SpectrumEntry(float(l0m), 1, 0, "lambda_minus", 0,
                                    (_unit(TrigPoly.zero(), TrigPoly.const(1.0)),)))
    entries.append(se.SpectrumEntry(float(l0p), 1, 0, "lambda_plus", 0,
                                    (_unit(TrigPoly.const(1.0), TrigPoly.zero()),)))
    for n in range(1, n_max + 1):
        lm, lp = lambda_branches(k, n)
        if n == k:
            lm = 0.0
        w = 2.0 * PI * n
        for lam, sgn, fam in ((float(lm), -1, "lambda_minus"), (float(lp), +1, "lambda_plus")):
            a = (lam - h) / w
            vecs = [_unit(TrigPoly.sin_mode(n, -a), TrigPoly.cos_mode(n))]
            if n != k:
                vecs.append(_unit(TrigPoly.cos_mode(n, a), TrigPoly.sin_mode(n)))
            entries.append(se.SpectrumEntry(lam, len(vecs), sgn * n, fam, n, tuple(vecs)))
    for lam, sgn, fam in zip(lambda_hat(k), (-1, +1), ("lambda_hat_minus", "lambda_hat_plus")):
        b = (lam - h) / (6.0 * PI * k)
        vec = _unit(TrigPoly.cos_mode(k, b), TrigPoly.sin_mode(k))
        entries.append(se.SpectrumEntry(lam, 1, sgn * k, fam, k, (vec,)))
    return sorted(entries, key=lambda e: e.value)


def ham_spectrum_numeric(k: int, N: int | None = None, method: str = "jacobi",
                         window=(-np.inf, np.inf)) -> list[se.SpectrumEntry]:
    """Clustered eigenvalues of :func:`ham_hessian_matrix` with numeric windings."""
    k = lag._check_mode(k)
    N = max(16, 4 * k) if N is None else N
    w, v = se.eigensolve(ham_hessian_matrix(k, N), method=method)
    return cz_local.entries_from_eigensystem(w, v, window, family="numeric")


def ham_zero_tol(k: int) -> float:
    c = lag.c_k(k)
    return 1e-9 * (4.0 / c ** 4)


def cz_index(k: int, mode: str = "closed_form", N: int | None = None,
             method: str = "jacobi") -> IndexReport:
    """Conley-Zehnder index at ``(x_k, y_k)`` from the spectrum and its windings.

    The kernel eigenvalue ``lambda_k^- = 0`` is counted as negative, which is
    the index of the operator shifted by a small ``-delta``; with it the
    winding ``-k`` is attained by two negative eigenvalues and ``p = 1``.
    """
    k = lag._check_mode(k)
    if mode == "closed_form":
        entries = ham_spectrum_closed(k, max(10 * k, 2 * k + 2))
    elif mode == "numeric":
        entries = ham_spectrum_numeric(k, N, method)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    alpha, parity, cz = cz_local.index_from_spectrum(entries, ham_zero_tol(k),
                                                     zero_policy="negative")
    morse = lag.morse_index(k, "numeric" if mode == "numeric" else "closed_form",
                            method=method)
    return IndexReport(k=k, alpha_S=alpha, parity=parity, cz=cz, cz_can=-cz, morse=morse)


def disjointness_gap(k: int, n_max: int) -> float:
    """``min |lambda_n^(-/+) - lambda_hat_k^(+/-)|`` over ``n = 0..n_max``."""
    k = lag._check_mode(k)
    if n_max < k:
        raise BadRange(f"n_max={n_max} must be >= k={k}")
    n = np.arange(n_max + 1)
    lm, lp = lambda_branches(k, n)
    lm = np.where(n == k, 0.0, lm)
    fam = np.concatenate([lm, lp])
    hat = np.array(lambda_hat(k))
    return float(np.min(np.abs(fam[:, None] - hat[None, :])))


def ordering_at_3k(k: int) -> bool:
    """``lambda_hat_k^- < lambda_3k^- < lambda_hat_k^+ < lambda_3k^+``."""
    hm, hp = lambda_hat(k)
    lm, lp = lambda_branches(k, 3 * k)
    return bool(hm < lm < hp < lp)


def spectrum_csv(entries) -> str:
    lines = ["family,n,lambda,mult,winding"]
    for e in entries:
        n = "" if e.n is None else str(e.n)
        w = "" if e.winding is None else str(e.winding)
        lines.append(f"{e.family},{n},{float(e.value):.17g},{e.multiplicity},{w}")
    return "\n".join(lines) + "\n"
