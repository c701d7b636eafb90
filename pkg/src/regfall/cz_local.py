"""Conley-Zehnder index of a path of symmetric 2x2 matrices via winding numbers.

For ``S: [0, 1] -> Sym(2)`` the operator ``L_S zeta = -J0 zeta' - S zeta`` on
1-periodic planar loops is self-adjoint with discrete spectrum.  Every
eigenvector winds around the origin a fixed number of times, and

    alpha(S) = max winding among negative eigenvalues
    p(S)     = 1 if both eigenvalues of winding alpha are negative, else 0
    CZ(S)    = 2 alpha(S) + p(S)

``L_S`` is discretized by Galerkin projection onto trigonometric pairs of
degree ``N``; an independent shooting solver locates the eigenvalues as the
``lambda`` for which ``zeta' = J0 (S + lambda) zeta`` has a periodic solution.
"""

from __future__ import annotations

import json
import numpy as np

from . import fourier_core as fc
from . import spectral_engine as se
from .errors import (DegenerateAtZero, DegenerateWindingMismatch, NonIntegralWinding,
                     VanishingEigenvector, WindowInsufficient, WindowTooWide)
from .fourier_core import TrigPoly

J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


class SymmetricPath:
    """Samples of a symmetric 2x2 matrix path on a uniform grid of [0, 1].

    Values between samples are linearly interpolated.  The path need not
    close up: ``S(1)`` may differ from ``S(0)``.
    """

    def __init__(self, grid, S):
        grid = np.asarray(grid, dtype=float)
        S = np.asarray(S, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid needs at least two points")
        if S.shape != (grid.size, 2, 2):
            raise ValueError(f"S must have shape ({grid.size}, 2, 2), got {S.shape}")
        if grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if not np.allclose(np.diff(grid), 1.0 / (grid.size - 1), rtol=0, atol=1e-12):
            raise ValueError("grid must be uniform")
        if np.any(S[:, 0, 1] != S[:, 1, 0]):
            raise ValueError("every sample of S must be exactly symmetric")
        grid.setflags(write=False)
        S.setflags(write=False)
        self.grid = grid
        self.S = S

    @property
    def grid_size(self) -> int:
        return self.grid.size - 1

    @classmethod
    def from_function(cls, fn, grid_size: int = 400) -> "SymmetricPath":
        grid = np.linspace(0.0, 1.0, grid_size + 1)
        S = np.array([np.asarray(fn(t), dtype=float) for t in grid])
        S = 0.5 * (S + np.swapaxes(S, 1, 2))
        return cls(grid, S)

    @classmethod
    def constant(cls, matrix, grid_size: int = 1) -> "SymmetricPath":
        m = np.asarray(matrix, dtype=float)
        return cls.from_function(lambda t: m, grid_size)

    @classmethod
    def from_json(cls, data) -> "SymmetricPath":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["grid"], data["S"])

    def to_json(self) -> dict:
        return {"grid": self.grid.tolist(), "S": self.S.tolist()}

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape + (2, 2))
        for i in range(2):
            for j in range(2):
                out[..., i, j] = np.interp(t, self.grid, self.S[:, i, j])
        return out

    def scaled(self, r: float) -> "SymmetricPath":
        return SymmetricPath(self.grid.copy(), r * self.S)

    def sup_norm(self) -> float:
        """``max_t ||S(t)||_2``, attained at a sample for linear interpolation."""
        return float(np.max(np.abs(np.linalg.eigvalsh(self.S)))) if self.S.size else 0.0

    def entry_fourier(self, N: int):
        """Exact Fourier coefficients (degree ``N``) of ``s11, s12, s22``."""
        return tuple(_pl_fourier(self.grid, self.S[:, i, j], N)
                     for i, j in ((0, 0), (0, 1), (1, 1)))


def _pl_fourier(grid, vals, N: int) -> TrigPoly:
    # exact coefficients of the piecewise-linear interpolant on [0, 1]
    a, b = grid[:-1], grid[1:]
    h = b - a
    fa = vals[:-1]
    m = np.diff(vals) / h
    mean = float(np.sum(0.5 * (vals[:-1] + vals[1:]) * h))
    if N == 0:
        return TrigPoly.const(mean)
    w = fc.TWO_PI * np.arange(1, N + 1)[:, None]
    ea, eb = np.exp(-1j * w * a), np.exp(-1j * w * b)
    e1 = (ea - eb) / (1j * w)
    seg = fa * e1 + m * (-h * eb / (1j * w) + e1 / (1j * w))
    c = seg.sum(axis=1)
    return TrigPoly(mean, 2.0 * c.real, -2.0 * c.imag)


def assemble_LS(S: SymmetricPath, N: int) -> se.DenseSymmetric:
    """Galerkin matrix of ``L_S`` in the orthonormal pair layout, dimension 2(2N+1)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    s11, s12, s22 = S.entry_fourier(2 * N)

    def op(xi, eta):
        d_xi, d_eta = fc.derivative(xi), fc.derivative(eta)
        out_xi = d_eta - (s11.product(xi) + s12.product(eta))
        out_eta = -d_xi - (s12.product(xi) + s22.product(eta))
        return out_xi.padded(N), out_eta.padded(N)

    return se.assemble_pair(op, N)


def winding_of_loop(zeta, M: int | None = None, vanish_rel: float = 1e-8) -> int:
    """Degree of ``t -> zeta(t)/|zeta(t)|`` for a pair of trig polynomials."""
    xi, eta = zeta
    if M is None:
        M = 64 * (max(xi.N, eta.N) + 1)
    t = np.arange(M) / M
    u, v = np.asarray(xi(t), dtype=float), np.asarray(eta(t), dtype=float)
    r = np.hypot(u, v)
    peak = np.max(r)
    if peak == 0.0 or np.min(r) <= vanish_rel * peak:
        raise VanishingEigenvector("loop passes (numerically) through the origin")
    ang = np.arctan2(v, u)
    inc = np.diff(np.append(ang, ang[0]))
    inc = (inc + np.pi) % (2.0 * np.pi) - np.pi
    # on a closed polygon the increments always sum to whole turns, so
    # a coarse grid shows up as large steps rather than as a fraction
    if np.max(np.abs(inc)) >= 0.5 * np.pi:
        raise NonIntegralWinding("angle steps of a quarter turn or more; refine the grid")
    turns = inc.sum() / (2.0 * np.pi)
    w = int(np.rint(turns))
    if abs(turns - w) >= 0.25:
        raise NonIntegralWinding(f"accumulated {turns:.3f} turns; refine the grid")
    return w


def default_window(N: int) -> tuple[float, float]:
    return (-0.5 * np.pi * N, 0.5 * np.pi * N)


def entries_from_eigensystem(w, v, window, family: str = "",
                             cluster_tol=None) -> list[se.SpectrumEntry]:
    """Cluster eigenpairs inside ``window`` and attach eigenvector windings."""
    lo, hi = window
    out = []
    for val, mult, idx in se.cluster(w, cluster_tol):
        if not lo <= val <= hi:
            continue
        loops = tuple(se.vector_to_loops(v[:, i]) for i in idx)
        winds = {winding_of_loop(z) for z in loops}
        if len(winds) != 1:
            raise DegenerateWindingMismatch(
                f"eigenvalue {val:.12g} carries windings {sorted(winds)}")
        out.append(se.SpectrumEntry(val, mult, winds.pop(), family, eigenvectors=loops))
    return out


def spectrum_with_winding(S: SymmetricPath, N: int, window=None,
                          method: str = "jacobi") -> list[se.SpectrumEntry]:
    """Eigenvalues of ``L_S`` inside ``window`` with multiplicities and windings.

    The default window ``|lambda| <= pi N / 2`` keeps away from the unreliable
    Galerkin edge modes; anything beyond ``|lambda| <= pi N`` is refused.
    """
    window = default_window(N) if window is None else tuple(window)
    if max(abs(window[0]), abs(window[1])) > np.pi * N:
        raise WindowTooWide(f"window {window} exceeds |lambda| <= pi N = {np.pi * N:.4g}")
    w, v = se.eigensolve(assemble_LS(S, N), method=method)
    return entries_from_eigensystem(w, v, window, family="L_S")


def index_from_spectrum(entries, zero_tol: float, zero_policy: str = "error"):
    """``(alpha, parity, cz)`` from a spectrum carrying windings.

    ``zero_policy="error"`` refuses a kernel.  ``zero_policy="negative"``
    counts eigenvalues within ``zero_tol`` of zero as negative, i.e. it
    evaluates the index of ``L_S - delta`` for small ``delta > 0``.
    """
    def is_neg(val):
        if abs(val) <= zero_tol:
            if zero_policy == "negative":
                return True
            raise DegenerateAtZero(f"0 is an eigenvalue (|lambda| = {abs(val):.3g})")
        return val < 0.0

    flags = [is_neg(e.value) for e in entries]
    neg = [e for e, f in zip(entries, flags) if f]
    if not neg:
        raise WindowInsufficient("no negative eigenvalue in the resolved window")
    alpha = max(e.winding for e in neg)
    members = [(e, f) for e, f in zip(entries, flags) if e.winding == alpha]
    count = sum(e.multiplicity for e, _ in members)
    if count != 2:
        raise WindowInsufficient(
            f"found multiplicity {count} for winding {alpha}; expected 2")
    parity = int(all(f for _, f in members))
    return alpha, parity, 2 * alpha + parity


def zero_tol(S: SymmetricPath) -> float:
    return 1e-9 * (1.0 + S.sup_norm())


def cz_of_path(S: SymmetricPath, N: int, window=None, method: str = "jacobi"):
    """``(alpha, parity, cz)`` for a non-degenerate path ``S``."""
    entries = spectrum_with_winding(S, N, window, method)
    return index_from_spectrum(entries, zero_tol(S), zero_policy="error")


def track_homotopy(S: SymmetricPath, N: int, rs=None, window=None):
    """Spectra along ``r S`` as ``{winding: [[eigenvalues at r], ...]}`` with ``rs``.

    Each winding's eigenvalues are listed with multiplicity, ascending.
    """
    rs = np.round(np.linspace(0.0, 1.0, 11), 12) if rs is None else np.asarray(rs)
    branches: dict[int, list[list[float]]] = {}
    for i, r in enumerate(rs):
        for e in spectrum_with_winding(S.scaled(float(r)), N, window):
            lst = branches.setdefault(e.winding, [[] for _ in rs])
            lst[i].extend([e.value] * e.multiplicity)
    return branches, rs


# -- shooting oracle ------------------------------------------------------

def monodromy(S: SymmetricPath, lams, steps: int = 2000) -> np.ndarray:
    """``Phi_lambda(1)`` for ``Phi' = J0 (S + lambda) Phi``, ``Phi(0) = I``, by RK4.

    Vectorized over ``lams``; returns an array of shape ``(len(lams), 2, 2)``.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    h = 1.0 / steps
    ts = np.arange(2 * steps + 1) * (0.5 * h)
    St = S(ts)
    s11, s12, s22 = St[:, 0, 0], St[:, 0, 1], St[:, 1, 1]
    L = lams.size
    phi = np.broadcast_to(np.eye(2), (L, 2, 2)).copy()

    def gen(i):
        # J0 (S + lambda) at half-step index i
        A = np.empty((L, 2, 2))
        A[:, 0, 0] = -s12[i]
        A[:, 0, 1] = -(s22[i] + lams)
        A[:, 1, 0] = s11[i] + lams
        A[:, 1, 1] = s12[i]
        return A

    A_prev = gen(0)
    for n in range(steps):
        A_mid = gen(2 * n + 1)
        A_next = gen(2 * n + 2)
        k1 = A_prev @ phi
        k2 = A_mid @ (phi + 0.5 * h * k1)
        k3 = A_mid @ (phi + 0.5 * h * k2)
        k4 = A_next @ (phi + h * k3)
        phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        A_prev = A_next
    return phi


def _illinois(f, lo, hi, flo, fhi, iters=60, xtol=1e-13):
    # vectorized regula falsi (Illinois variant) on sign-changing brackets
    side = np.zeros(lo.size, dtype=int)
    for _ in range(iters):
        x = (lo * fhi - hi * flo) / (fhi - flo)
        fx = f(x)
        left = np.sign(fx) == np.sign(flo)
        lo_new = np.where(left, x, lo)
        hi_new = np.where(left, hi, x)
        flo = np.where(left, fx, np.where(side == -1, 0.5 * flo, flo))
        fhi = np.where(left, np.where(side == 1, 0.5 * fhi, fhi), fx)
        side = np.where(left, 1, -1)
        lo, hi = lo_new, hi_new
        if np.max(hi - lo) < xtol or np.all(fx == 0.0):
            break
    return 0.5 * (lo + hi) if np.max(hi - lo) < xtol else x


def shooting_eigenvalues(S: SymmetricPath, window, steps: int = 2000,
                         dlam: float = 0.01, double_tol: float = 1e-6,
                         tangent_max: float = 0.05):
    """Eigenvalues of ``L_S`` in ``window`` from the monodromy, with multiplicity.

    ``lambda`` is an eigenvalue iff ``Phi_lambda(1)`` has eigenvalue 1, i.e.
    ``2 - tr Phi_lambda(1) = 0`` (``det Phi = 1``).  Simple roots are sign
    changes; a root where ``Phi_lambda(1) = I`` is a tangency and has
    multiplicity 2.
    """
    lo, hi = window
    grid = np.arange(lo, hi + dlam, dlam)

    def f(lams):
        phi = monodromy(S, lams, steps)
        return 2.0 - (phi[:, 0, 0] + phi[:, 1, 1])

    fg = f(grid)
    roots: list[tuple[float, int]] = []
    sc = np.nonzero(np.sign(fg[:-1]) * np.sign(fg[1:]) < 0)[0]
    if sc.size:
        r = _illinois(f, grid[sc], grid[sc + 1], fg[sc], fg[sc + 1])
        roots += [(float(x), 1) for x in r]
    roots += [(float(grid[i]), 1) for i in np.nonzero(fg == 0.0)[0]]
    # tangential roots: local minima of |f| without a sign change nearby
    a = np.abs(fg)
    cand = [i for i in range(1, grid.size - 1)
            if a[i] <= a[i - 1] and a[i] <= a[i + 1] and a[i] < tangent_max
            and fg[i - 1] * fg[i] > 0 and fg[i] * fg[i + 1] > 0]
    if cand:
        cand = np.array(cand)
        # refine the minimum through the sign change of a central-difference f'
        eps = 1e-6

        def df(x):
            return (f(x + eps) - f(x - eps)) / (2 * eps)

        l, r_ = grid[cand - 1], grid[cand + 1]
        dl, dr = df(l), df(r_)
        ok = dl * dr < 0
        if np.any(ok):
            xm = _illinois(df, l[ok], r_[ok], dl[ok], dr[ok], xtol=1e-12)
            phi = monodromy(S, xm, steps)
            for x, ph in zip(xm, phi):
                if np.max(np.abs(ph - np.eye(2))) < double_tol:
                    roots.append((float(x), 2))
    roots.sort()
    # a double root may show up as one or two sign changes through rounding;
    # it is recognised by Phi = I and merged
    if roots:
        phi = monodromy(S, [r for r, _ in roots], steps)
        is_double = np.max(np.abs(phi - np.eye(2)), axis=(1, 2)) < double_tol
        merged: list[tuple[float, int]] = []
        flags: list[bool] = []
        for (r, m), d in zip(roots, is_double):
            if merged and r - merged[-1][0] <= 1e-6 and (d or flags[-1]):
                merged[-1] = (0.5 * (merged[-1][0] + r), 2)
                flags[-1] = True
            else:
                merged.append((r, 2 if d else m))
                flags.append(bool(d))
        roots = merged
    return roots
