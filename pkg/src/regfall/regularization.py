"""Time rescaling between regularized loops and physical free-fall orbits.

A loop ``x(tau)`` gives classical time ``t_x(tau) = int_0^tau x^2 / ||x||^2``
and the physical trajectory ``q_x = x^2 o tau_x`` with ``tau_x = t_x^{-1}``.
Zeros of ``x`` become collision times of ``q_x``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import fourier_core as fc
from .errors import CollisionPresent, DomainError, NonMonotone, NotCritical
from .fourier_core import TrigPoly
from .lagrangian import LagCritical, grad_B

POS_FLOOR = 1e-9
DEFAULT_EXCLUSION = 0.05


@dataclass(frozen=True, eq=False)
class PhysicalOrbit:
    """A physical trajectory sampled on a uniform grid of classical time.

    ``q_dot`` is NaN at samples that hit a collision exactly.
    """

    grid: np.ndarray
    q: np.ndarray
    q_dot: np.ndarray
    collision_times: np.ndarray
    source_norm_sq: float
    tau: np.ndarray | None = None
    near_collision: np.ndarray | None = None

    def to_csv(self) -> str:
        near = self.near_collision if self.near_collision is not None \
            else np.zeros(self.grid.size, dtype=bool)
        lines = ["t,q,q_dot,is_near_collision"]
        for t, q, qd, nc in zip(self.grid, self.q, self.q_dot, near):
            lines.append(f"{t:.17g},{q:.17g},{qd:.17g},{int(bool(nc))}")
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        return {"collision_times": [float(t) for t in self.collision_times],
                "norm_x_sq": float(self.source_norm_sq)}


def _as_loop(x) -> TrigPoly:
    return x.x if isinstance(x, LagCritical) else x


def _check_unit(t, name, slack=1e-12):
    # values a rounding error outside [0, 1] are clipped, not rejected
    t = np.asarray(t, dtype=float)
    if np.any(t < -slack) or np.any(t > 1.0 + slack) or np.any(~np.isfinite(t)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return np.clip(t, 0.0, 1.0)


def classical_time(x: TrigPoly, tau):
    """``t_x(tau) = int_0^tau x(s)^2 ds / ||x||^2``, exact from coefficients."""
    x = _as_loop(x)
    tau = _check_unit(tau, "tau")
    x2 = x.product(x)
    nx = fc._loop_norm_sq(x)
    return x2.integral_from_zero(tau) / nx


def _invert_monotone(F, dF, targets, width=1e-13, newton_floor=1e-6):
    """Solve ``F(s) = target`` on [0, 1] for a non-decreasing ``F`` with F(0)=0, F(1)=1."""
    targets = np.asarray(targets, dtype=float)
    lo = np.zeros_like(targets)
    hi = np.ones_like(targets)
    while np.max(hi - lo, initial=0.0) > width:
        mid = 0.5 * (lo + hi)
        below = F(mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    s = 0.5 * (lo + hi)
    # one guarded Newton step away from collisions, where F' is not tiny
    d = dF(s)
    ok = d > newton_floor
    step = np.where(ok, (F(s) - targets) / np.where(ok, d, 1.0), 0.0)
    s_new = np.clip(s - step, lo - width, hi + width)
    return np.clip(np.where(ok, s_new, s), 0.0, 1.0)


def _check_monotone(x: TrigPoly):
    # a nonzero trig polynomial has isolated zeros, so this is a guard only
    grid = np.linspace(0.0, 1.0, 64 * (x.N + 1) + 1)
    if np.any(np.diff(classical_time(x, grid)) <= 0.0):
        raise NonMonotone("classical time is not strictly increasing for this loop")


def inverse_time(x: TrigPoly, t):
    """``tau_x(t)``, the inverse of classical time (vectorized bisection)."""
    x = _as_loop(x)
    t = _check_unit(t, "t")
    nx = fc._loop_norm_sq(x)
    _check_monotone(x)
    x2 = x.product(x)
    out = _invert_monotone(lambda s: x2.integral_from_zero(s) / nx,
                           lambda s: x2(s) / nx, np.atleast_1d(t))
    return out if t.ndim else float(out[0])


def inverse_time_rate(x: TrigPoly, t):
    """``d tau_x / dt = ||x||^2 / x(tau_x(t))^2`` (infinite at collisions)."""
    x = _as_loop(x)
    tau = inverse_time(x, t)
    with np.errstate(divide="ignore"):
        return fc.norm_sq(x) / np.asarray(x(tau)) ** 2


def regularized_zeros(x: TrigPoly) -> np.ndarray:
    """Zeros of ``x`` in [0, 1) found by sign changes and bracketing."""
    x = _as_loop(x)
    M = 64 * (x.N + 1)
    grid = np.arange(M + 1) / M
    vals = x(grid)
    roots = []
    for j in range(M):
        a, b = vals[j], vals[j + 1]
        if a == 0.0:
            roots.append(grid[j])
        elif a * b < 0.0:
            roots.append(optimize.brentq(x, grid[j], grid[j + 1], xtol=1e-15, rtol=1e-15))
    return np.array(sorted(r % 1.0 for r in roots))


def collision_times(x: TrigPoly) -> np.ndarray:
    """Classical collision times ``t_x(tau_i)`` for the zeros ``tau_i`` of ``x``."""
    x = _as_loop(x)
    z = regularized_zeros(x)
    return np.asarray(classical_time(x, z)) if z.size else z


def near_collision_mask(t, collisions, exclusion=DEFAULT_EXCLUSION) -> np.ndarray:
    """Flag times within ``exclusion`` of a collision.

    ``exclusion`` is a fraction of the collision-free arc containing each
    time, so it stays meaningful when collisions are dense.
    """
    t = np.asarray(t, dtype=float)
    c = np.sort(np.asarray(collisions, dtype=float) % 1.0)
    if c.size == 0:
        return np.zeros(t.shape, dtype=bool)
    tt = t % 1.0
    nxt = np.searchsorted(c, tt, side="left")
    right = np.where(nxt < c.size, c[np.minimum(nxt, c.size - 1)], c[0] + 1.0)
    left = np.where(nxt > 0, c[np.maximum(nxt - 1, 0)], c[-1] - 1.0)
    arc = right - left
    dist = np.minimum(tt - left, right - tt)
    return dist <= exclusion * arc


def rescale_square(x: TrigPoly, M: int = 2048, exclusion: float = DEFAULT_EXCLUSION) -> PhysicalOrbit:
    """Sample ``q_x = x^2 o tau_x`` and its velocity on ``t_j = j/M``."""
    x = _as_loop(x)
    nx = fc._loop_norm_sq(x)
    grid = np.arange(M) / M
    tau = inverse_time(x, grid)
    xv = x(tau)
    dxv = fc.derivative(x)(tau)
    q = xv * xv
    with np.errstate(divide="ignore", invalid="ignore"):
        q_dot = np.where(np.abs(xv) > 0.0, 2.0 * nx * dxv / xv, np.nan)
    coll = collision_times(x)
    return PhysicalOrbit(grid=grid, q=q, q_dot=q_dot, collision_times=coll,
                         source_norm_sq=nx, tau=tau,
                         near_collision=near_collision_mask(grid, coll, exclusion))


def inverse_Q(q, N: int = 32, M: int | None = None) -> TrigPoly:
    """Recover the regularized loop ``x_q = q^(1/2) o tau_{1/sqrt q}``.

    ``q`` is a :class:`PhysicalOrbit`, a positive :class:`TrigPoly` or an
    array of positive samples on a uniform grid of classical time.
    """
    if isinstance(q, PhysicalOrbit):
        samples = np.asarray(q.q, dtype=float)
    elif isinstance(q, TrigPoly):
        samples = fc.sample(q, M or max(1024, 8 * q.N + 1))
    else:
        samples = np.asarray(q, dtype=float)
    if np.min(samples) <= POS_FLOOR:
        raise CollisionPresent("inverse_Q needs a strictly positive trajectory")
    Ms = samples.size
    nq = (Ms - 1) // 2
    qpoly = fc.from_samples(samples, nq)
    rpoly = fc.from_samples(1.0 / samples, nq)
    total = rpoly.constant
    # tau = t_{1/sqrt q}(s); invert it on a uniform tau grid
    Mout = 4 * N + 1
    tau = np.arange(Mout) / Mout
    s = _invert_monotone(lambda u: rpoly.integral_from_zero(u) / total,
                         lambda u: rpoly(u) / total, tau)
    return fc.from_samples(np.sqrt(qpoly(s)), N)


def _local_q(x: TrigPoly, tau_c: float, nx: float):
    """``q(t_c + side * dt)`` near a collision, inverting classical time locally.

    Around a zero ``tau_c`` classical time is cubically flat, so the inversion
    is done on the shifted loop to keep the small increments accurate.
    """
    xc = x.shifted(tau_c)
    X = xc.product(xc)

    def q_at(dt, side):
        target = nx * dt
        s = optimize.brentq(lambda u: side * X.integral_from_zero(side * u) - target,
                            0.0, 1.0, xtol=1e-15, rtol=1e-15)
        return float(xc(side * s)) ** 2

    return q_at


def mean_inverse_check(x: TrigPoly) -> dict:
    """Compare ``int_0^1 dt / q_x`` in both time coordinates.

    In regularized time the integral is exactly ``1/||x||^2``.  In classical
    time it is integrated numerically; next to each collision the
    substitution ``t = t_c +- u^3`` removes the ``|t - t_c|^(-2/3)`` singularity.
    """
    x = _as_loop(x)
    nx = fc._loop_norm_sq(x)
    exact = 1.0 / nx
    x2 = x.product(x)

    def q_global(t):
        tau = _invert_monotone(lambda s: x2.integral_from_zero(s) / nx,
                               lambda s: x2(s) / nx, np.array([t]))[0]
        return float(x(tau)) ** 2

    zeros = regularized_zeros(x)
    coll = np.asarray(classical_time(x, zeros)) if zeros.size else zeros
    local = {float(c): _local_q(x, float(z), nx) for c, z in zip(coll, zeros)}
    if 0.0 in local:
        local[1.0] = local[0.0]
    breaks = sorted({0.0, 1.0, *local})
    opts = dict(limit=200, epsabs=1e-12, epsrel=1e-10)

    def piece(a, b):
        # integral over [a, b] where at most a or b is a collision
        if a in local:
            q_at = local[a]
            val, _ = integrate.quad(lambda u: 3 * u * u / q_at(u ** 3, +1),
                                    0.0, (b - a) ** (1 / 3), **opts)
        elif b in local:
            q_at = local[b]
            val, _ = integrate.quad(lambda u: 3 * u * u / q_at(u ** 3, -1),
                                    0.0, (b - a) ** (1 / 3), **opts)
        else:
            val, _ = integrate.quad(lambda t: 1.0 / q_global(t), a, b, **opts)
        return val

    numeric = 0.0
    with warnings.catch_warnings():
        # the discrepancy is reported, so quad's accuracy warnings add nothing
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(breaks[:-1], breaks[1:]):
            m = 0.5 * (a + b)
            numeric += piece(a, m) + piece(m, b)
    return {"tau_form": exact, "t_form": numeric, "discrepancy": abs(numeric - exact)}


def _physical_arrays(x: TrigPoly, M: int, exclusion: float):
    nx = fc._loop_norm_sq(x)
    orbit = rescale_square(x, M, exclusion)
    keep = ~orbit.near_collision & (orbit.q > POS_FLOOR)
    tau = orbit.tau[keep]
    xv = x(tau)
    dx = fc.derivative(x)(tau)
    ddx = fc.second_derivative(x)(tau)
    q = xv * xv
    q_dot = 2.0 * nx * dx / xv
    q_ddot = 2.0 * nx * nx / xv ** 3 * (ddx - dx * dx / xv)
    return orbit.grid[keep], q, q_dot, q_ddot


def _require_critical(x: TrigPoly, tol: float):
    g = grad_B(x)
    scale = max(1.0, fc.second_derivative(x).max_abs_coeff())
    if g.max_abs_coeff() > tol * scale:
        raise NotCritical(f"|grad B| = {g.max_abs_coeff():.3g} exceeds tolerance")


def physical_residual(x, exclusion: float = DEFAULT_EXCLUSION, M: int = 2000,
                      tol: float = 1e-10) -> float:
    """``max |q'' + 1/q^2|`` away from collisions, with ``q''`` by the chain rule."""
    x = _as_loop(x)
    _require_critical(x, tol)
    _, q, _, q_ddot = _physical_arrays(x, M, exclusion)
    if q.size == 0:
        raise DomainError("exclusion leaves no admissible sample")
    return float(np.max(np.abs(q_ddot + 1.0 / q ** 2)))


def energy(x, exclusion: float = DEFAULT_EXCLUSION, M: int = 2000):
    """Times and values of ``E = q_dot^2 / 2 - 1/q`` away from collisions."""
    x = _as_loop(x)
    t, q, q_dot, _ = _physical_arrays(x, M, exclusion)
    return t, 0.5 * q_dot ** 2 - 1.0 / q


def energy_drift(x, exclusion: float = DEFAULT_EXCLUSION, M: int = 2000) -> float:
    """Relative spread ``max |E - mean E| / |mean E|`` between collisions."""
    _, E = energy(x, exclusion, M)
    ref = np.mean(E)
    return float(np.max(np.abs(E - ref)) / max(abs(ref), 1e-300))
