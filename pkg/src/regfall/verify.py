"""Executable acceptance checks, grouped into suites.

Each check returns a :class:`CheckResult`; :func:`run_suite` runs a suite
and records the wall-clock time of every check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import cz_local
from . import fourier_core as fc
from . import hamiltonian as ham
from . import lagrangian as lag
from . import regularization as reg
from .fourier_core import TrigPoly

PI = np.pi


@dataclass
class CheckResult:
    cid: str
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict, repr=False)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.cid:>3} {self.title} ({self.seconds:.2f}s): {self.detail}"

    def to_json(self) -> dict:
        return {"id": self.cid, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


# -- random inputs --------------------------------------------------------

def random_loop(rng: np.random.Generator, N: int = 4, offset: float = 0.0,
                decay: float = 1.0) -> TrigPoly:
    n = np.arange(1, N + 1)
    scale = 1.0 / n ** decay
    return TrigPoly(offset + rng.normal(), rng.normal(size=N) * scale,
                    rng.normal(size=N) * scale)


def random_positive_loop(rng: np.random.Generator, N: int = 3,
                         amplitude: float = 0.4) -> TrigPoly:
    # 1 + bump with sup norm of the bump at most amplitude
    f = random_loop(rng, N, decay=2.0) - 0.0
    f = TrigPoly(0.0, f.cos_coeffs, f.sin_coeffs)
    s = np.sum(np.abs(f.cos_coeffs)) + np.sum(np.abs(f.sin_coeffs))
    return 1.0 + (amplitude / s) * f


def random_symmetric_path(rng: np.random.Generator, degree: int = 2, amplitude: float = 3.0,
                          grid_size: int = 400) -> cz_local.SymmetricPath:
    """A smooth periodic path: entries are random trig polynomials, sampled."""
    C = rng.normal(size=(3, 2 * degree + 1)) * amplitude / np.arange(1, 2 * degree + 2)
    t = np.linspace(0.0, 1.0, grid_size + 1)
    basis = [np.ones_like(t)]
    for n in range(1, degree + 1):
        basis += [np.cos(2 * PI * n * t), np.sin(2 * PI * n * t)]
    e = C @ np.array(basis)
    S = np.empty((t.size, 2, 2))
    S[:, 0, 0], S[:, 1, 1] = e[0], e[2]
    S[:, 0, 1] = S[:, 1, 0] = e[1]
    return cz_local.SymmetricPath(t, S)


def _rel(a, b, floor=1.0):
    return abs(a - b) / max(floor, abs(b))


# -- criteria -------------------------------------------------------------

def check_index_theorem(kmax: int = 10, **_) -> CheckResult:
    bad = []
    for k in range(1, kmax + 1):
        m = lag.morse_index(k, "numeric", N=4 * k)
        rep = ham.cz_index(k, "numeric", N=4 * k)
        if not (m == rep.cz_can == rep.morse == 2 * k - 1):
            bad.append((k, m, rep.cz_can))
    return CheckResult("1", "index theorem", not bad,
                       f"k=1..{kmax}: morse = cz_can = 2k-1" if not bad else f"mismatch {bad}")


def check_critical_values(kmax: int = 10, **_) -> CheckResult:
    err = max(_rel(lag.action_B(lag.critical_point(k).x), lag.critical_value(k), 0.0)
              for k in range(1, kmax + 1))
    return CheckResult("2", "critical values", err <= 1e-12, f"max rel err {err:.2e}")


def check_lag_spectrum(kmax: int = 10, **_) -> CheckResult:
    worst, bad = 0.0, []
    for k in range(1, kmax + 1):
        num = lag.lag_spectrum_numeric(k, 4 * k)
        for e in lag.lag_spectrum(k, 2 * k):
            near = min(num, key=lambda f: abs(f.value - e.value))
            err = abs(near.value - e.value) / max(1.0, abs(e.value))
            worst = max(worst, err)
            if err > 1e-9 or near.multiplicity != e.multiplicity:
                bad.append((k, e.family, e.n))
    return CheckResult("3", "Lagrangian spectrum", not bad,
                       f"max rel err {worst:.2e}" + (f"; bad {bad[:5]}" if bad else ""))


def check_ham_spectrum(kmax: int = 10, **_) -> CheckResult:
    worst, bad = 0.0, []
    for k in range(1, kmax + 1):
        N = 4 * k
        num = ham.ham_spectrum_numeric(k, N)
        for e in ham.ham_spectrum_closed(k, N):
            near = min(num, key=lambda f: abs(f.value - e.value))
            err = abs(near.value - e.value) / max(1.0, abs(e.value))
            worst = max(worst, err)
            if err > 1e-9 or near.multiplicity != e.multiplicity or near.winding != e.winding:
                bad.append((k, e.family, e.n))
        zero = min(num, key=lambda f: abs(f.value))
        if abs(zero.value) > ham.ham_zero_tol(k) or zero.winding != -k:
            bad.append((k, "kernel", zero.value, zero.winding))
    return CheckResult("4", "Hamiltonian spectrum and windings", not bad,
                       f"max rel err {worst:.2e}" + (f"; bad {bad[:5]}" if bad else ""))


def check_norms(kmax: int = 10, **_) -> CheckResult:
    err = 0.0
    for k in range(1, kmax + 1):
        cp = ham.critical_point_ham(k)
        err = max(err, _rel(fc.norm_sq(cp.x), (4 * PI * k) ** (-2.0 / 3.0), 0.0),
                  _rel(fc.norm_sq(cp.y), 4.0, 0.0))
    return CheckResult("5", "norm identities", err <= 1e-12, f"max rel err {err:.2e}")


def check_gradients(seed: int = 0, count: int = 50, h: float = 1e-5, **_) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        x = random_loop(rng, 4, offset=1.0)
        y = random_loop(rng, 4)
        xi, eta = random_loop(rng, 4), random_loop(rng, 4)
        fd = (lag.action_B(x + h * xi) - lag.action_B(x - h * xi)) / (2 * h)
        worst = max(worst, _rel(fd, lag.diff_B(x, xi), 0.0))
        p = ham.PhaseLoop(x, y)
        fd = (ham.action_AH(ham.PhaseLoop(x + h * xi, y + h * eta))
              - ham.action_AH(ham.PhaseLoop(x - h * xi, y - h * eta))) / (2 * h)
        worst = max(worst, _rel(fd, ham.diff_AH(p, xi, eta), 0.0))
    return CheckResult("6", "gradient checks", worst <= 1e-6,
                       f"{count} inputs, max rel err {worst:.2e}")


def check_domination(seed: int = 0, count: int = 100, **_) -> CheckResult:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(count):
        x, y = random_loop(rng, 5, offset=0.5), random_loop(rng, 5)
        p = ham.PhaseLoop(x, y)
        worst = max(worst, _rel(ham.action_AH(p) + ham.domination_gap(p), lag.action_B(x), 0.0))
        gap0 = ham.domination_gap(ham.PhaseLoop(x, ham.legendre_fiber(x)))
        worst = max(worst, gap0 / lag.action_B(x))
    return CheckResult("7", "domination identity", worst <= 1e-10,
                       f"{count} pairs, max rel err {worst:.2e}")


def check_regularization(seed: int = 0, kmax: int = 5, **_) -> CheckResult:
    rng = np.random.default_rng(seed + 2)
    qr = rq = 0.0
    for _ in range(10):
        x = random_positive_loop(rng)
        back = reg.inverse_Q(reg.rescale_square(x, 2048), N=32)
        qr = max(qr, (back - x).max_abs_coeff())
        q = random_positive_loop(rng)
        xq = reg.inverse_Q(q, N=64)
        orbit = reg.rescale_square(xq, 512)
        rq = max(rq, float(np.max(np.abs(orbit.q - q(orbit.grid)))))
    ks = range(1, min(kmax, 5) + 1)
    mean_err = max(reg.mean_inverse_check(lag.critical_point(k).x)["discrepancy"] for k in ks)
    resid = max(reg.physical_residual(lag.critical_point(k)) for k in ks)
    drift = max(reg.energy_drift(lag.critical_point(k)) for k in ks)
    ok = qr <= 1e-6 and rq <= 1e-6 and mean_err <= 1e-6 and resid <= 1e-6 and drift <= 1e-6
    return CheckResult("8", "regularization", ok,
                       f"Q.R {qr:.1e}, R.Q {rq:.1e}, mean 1/q {mean_err:.1e}, "
                       f"residual {resid:.1e}, drift {drift:.1e}")


def check_cz_local(seed: int = 0, paths: int = 5, N: int = 16,
                   window=(-12.0, 12.0), **_) -> CheckResult:
    notes, ok = [], True
    # S = 0: 2 pi l with winding l and multiplicity 2 for |l| <= N/2
    zero = cz_local.SymmetricPath.constant(np.zeros((2, 2)))
    ent = cz_local.spectrum_with_winding(zero, N, window=(-PI * N, PI * N))
    got = {e.winding: (e.value, e.multiplicity) for e in ent}
    for ell in range(-N // 2, N // 2 + 1):
        v = got.get(ell)
        if v is None or v[1] != 2 or abs(v[0] - 2 * PI * ell) > 1e-9:
            ok = False
            notes.append(f"S=0 l={ell}")
    rng = np.random.default_rng(seed + 3)
    worst = 0.0
    for _ in range(paths):
        S = random_symmetric_path(rng)
        full = cz_local.spectrum_with_winding(S, N)
        winds = [e.winding for e in full]
        if any(b < a for a, b in zip(winds, winds[1:])):
            ok = False
            notes.append("winding not monotone")
        gal = np.repeat([e.value for e in full if window[0] <= e.value <= window[1]],
                        [e.multiplicity for e in full if window[0] <= e.value <= window[1]])
        roots = cz_local.shooting_eigenvalues(S, window)
        sh = np.repeat([r for r, _ in roots], [m for _, m in roots])
        if gal.size != sh.size:
            ok = False
            notes.append(f"count {gal.size} vs shooting {sh.size}")
            continue
        if gal.size:
            worst = max(worst, float(np.max(np.abs(gal - sh))))
    ok = ok and worst <= 1e-6
    return CheckResult("9", "local CZ module", ok,
                       f"{paths} random paths, max |galerkin - shooting| {worst:.1e}"
                       + (f"; {notes}" if notes else ""))


def check_disjointness(kmax: int = 5, **_) -> CheckResult:
    ks = range(1, min(kmax, 5) + 1)
    gap = min(ham.disjointness_gap(k, 10 * k) for k in ks)
    order = all(ham.ordering_at_3k(k) for k in ks)
    return CheckResult("10", "family disjointness", gap > 0 and order,
                       f"min gap {gap:.4g}, ordering at 3k {'holds' if order else 'fails'}")


def check_monotone_branches(kmax: int = 10, **_) -> CheckResult:
    ok = True
    for k in range(1, kmax + 1):
        lm, lp = ham.lambda_branches(k, np.arange(10 * k + 1))
        ok &= bool(np.all(np.diff(lm) < 0) and np.all(np.diff(lp) > 0))
    ind = [lag.morse_index(k, "numeric") for k in range(1, kmax + 1)]
    odd = all(m % 2 == 1 and m > 0 for m in ind)
    return CheckResult("11", "branch monotonicity and odd indices", ok and odd,
                       f"branches {'monotone' if ok else 'not monotone'}, morse {ind}")


SUITES = {
    "core": [check_index_theorem, check_critical_values, check_norms, check_gradients,
             check_domination, check_monotone_branches],
    "spectra": [check_lag_spectrum, check_ham_spectrum, check_cz_local, check_disjointness],
    "regularization": [check_regularization],
}


def run_suite(suite: str = "all", kmax: int = 10, seed: int = 0) -> list[CheckResult]:
    if suite == "all":
        checks = SUITES["core"] + SUITES["spectra"] + SUITES["regularization"]
    elif suite in SUITES:
        checks = SUITES[suite]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    out = []
    for chk in checks:
        t0 = time.perf_counter()
        res = chk(kmax=kmax, seed=seed)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return sorted(out, key=lambda r: int(r.cid))
