"""Real trigonometric polynomials on the circle R/Z.

A :class:`TrigPoly` stores

    f(tau) = constant + sum_{n=1}^{N} (cos[n] cos 2 pi n tau + sin[n] sin 2 pi n tau)

All integrals of trigonometric-polynomial integrands are computed from the
coefficients, never by quadrature.  Operands of different truncation level
are zero-padded to the larger one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InsufficientSamples, ZeroLoop

TWO_PI = 2.0 * np.pi


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """A real 1-periodic trigonometric polynomial of degree ``N``."""

    constant: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.cos_coeffs)
        s = _frozen(self.sin_coeffs)
        if c.shape != s.shape:
            raise ValueError(
                f"cos_coeffs and sin_coeffs differ in length ({c.size} != {s.size})")
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "cos_coeffs", c)
        object.__setattr__(self, "sin_coeffs", s)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, N: int = 0) -> "TrigPoly":
        return cls(0.0, np.zeros(N), np.zeros(N))

    @classmethod
    def const(cls, value: float, N: int = 0) -> "TrigPoly":
        return cls(value, np.zeros(N), np.zeros(N))

    @classmethod
    def cos_mode(cls, n: int, amplitude: float = 1.0, N: int | None = None) -> "TrigPoly":
        """``amplitude * cos(2 pi n tau)``; ``n = 0`` gives a constant."""
        N = n if N is None else N
        if n == 0:
            return cls.const(amplitude, N)
        c = np.zeros(N)
        c[n - 1] = amplitude
        return cls(0.0, c, np.zeros(N))

    @classmethod
    def sin_mode(cls, n: int, amplitude: float = 1.0, N: int | None = None) -> "TrigPoly":
        N = n if N is None else N
        s = np.zeros(N)
        if n > 0:
            s[n - 1] = amplitude
        return cls(0.0, np.zeros(N), s)

    @classmethod
    def from_json(cls, data) -> "TrigPoly":
        if isinstance(data, str):
            data = json.loads(data)
        cos = list(data.get("cos", []))
        sin = list(data.get("sin", []))
        N = max(len(cos), len(sin))
        cos += [0.0] * (N - len(cos))
        sin += [0.0] * (N - len(sin))
        return cls(data.get("constant", 0.0), cos, sin)

    def to_json(self) -> dict:
        return {"constant": self.constant,
                "cos": self.cos_coeffs.tolist(),
                "sin": self.sin_coeffs.tolist()}

    # -- basic structure --------------------------------------------------
    @property
    def N(self) -> int:
        return self.cos_coeffs.size

    def padded(self, N: int) -> "TrigPoly":
        """Zero-pad (or truncate) to degree ``N``."""
        c = np.zeros(N)
        s = np.zeros(N)
        m = min(N, self.N)
        c[:m] = self.cos_coeffs[:m]
        s[:m] = self.sin_coeffs[:m]
        return TrigPoly(self.constant, c, s)

    truncated = padded

    def coeff_vector(self) -> np.ndarray:
        """Coefficients interleaved as [a0, a1, b1, a2, b2, ...]."""
        out = np.empty(2 * self.N + 1)
        out[0] = self.constant
        out[1::2] = self.cos_coeffs
        out[2::2] = self.sin_coeffs
        return out

    @classmethod
    def from_coeff_vector(cls, v) -> "TrigPoly":
        v = np.asarray(v, dtype=float)
        if v.size % 2 != 1:
            raise ValueError("coefficient vector must have odd length 2N+1")
        return cls(v[0], v[1::2], v[2::2])

    def __repr__(self):
        return (f"TrigPoly(constant={self.constant!r}, "
                f"cos={self.cos_coeffs.tolist()!r}, sin={self.sin_coeffs.tolist()!r})")

    # -- evaluation -------------------------------------------------------
    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.N == 0:
            return np.full(tau.shape, self.constant) if tau.ndim else self.constant
        n = np.arange(1, self.N + 1)
        phase = TWO_PI * np.multiply.outer(tau, n)
        val = self.constant + np.cos(phase) @ self.cos_coeffs + np.sin(phase) @ self.sin_coeffs
        return val if tau.ndim else float(val)

    # -- algebra ----------------------------------------------------------
    def _aligned(self, other: "TrigPoly"):
        N = max(self.N, other.N)
        return self.padded(N), other.padded(N)

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            return TrigPoly(self.constant + float(other), self.cos_coeffs, self.sin_coeffs)
        a, b = self._aligned(other)
        return TrigPoly(a.constant + b.constant, a.cos_coeffs + b.cos_coeffs,
                        a.sin_coeffs + b.sin_coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.constant, -self.cos_coeffs, -self.sin_coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return self.product(other)
        r = float(other)
        return TrigPoly(r * self.constant, r * self.cos_coeffs, r * self.sin_coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1.0 / float(other))

    def _complex(self) -> np.ndarray:
        # c_n for n = -N..N
        N = self.N
        c = np.empty(2 * N + 1, dtype=complex)
        pos = 0.5 * (self.cos_coeffs - 1j * self.sin_coeffs)
        c[N] = self.constant
        c[N + 1:] = pos
        c[:N] = np.conj(pos[::-1])
        return c

    @classmethod
    def _from_complex(cls, c: np.ndarray) -> "TrigPoly":
        N = (c.size - 1) // 2
        pos = c[N + 1:]
        return cls(c[N].real, 2.0 * pos.real, -2.0 * pos.imag)

    def product(self, other: "TrigPoly") -> "TrigPoly":
        """Exact pointwise product; the degree is the sum of the degrees."""
        return TrigPoly._from_complex(np.convolve(self._complex(), other._complex()))

    def shifted(self, sigma: float) -> "TrigPoly":
        """The time shift ``tau -> f(tau + sigma)``."""
        n = np.arange(1, self.N + 1)
        cs, sn = np.cos(TWO_PI * n * sigma), np.sin(TWO_PI * n * sigma)
        a, b = self.cos_coeffs, self.sin_coeffs
        return TrigPoly(self.constant, a * cs + b * sn, b * cs - a * sn)

    def mean(self) -> float:
        return self.constant

    def integral_from_zero(self, tau):
        """``int_0^tau f(s) ds``, exact and vectorized in ``tau``."""
        tau = np.asarray(tau, dtype=float)
        out = self.constant * tau
        if self.N:
            n = np.arange(1, self.N + 1)
            w = TWO_PI * n
            phase = TWO_PI * np.multiply.outer(tau, n)
            out = out + np.sin(phase) @ (self.cos_coeffs / w) \
                + (1.0 - np.cos(phase)) @ (self.sin_coeffs / w)
        return out if tau.ndim else float(out)

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeff_vector())))


def as_trigpoly(f) -> TrigPoly:
    if isinstance(f, TrigPoly):
        return f
    if isinstance(f, dict):
        return TrigPoly.from_json(f)
    return TrigPoly.const(float(f))


def eval(f: TrigPoly, tau):  # noqa: A001 - mirrors the operation name
    """Evaluate ``f`` at ``tau`` (scalar or array)."""
    return f(tau)


def derivative(f: TrigPoly) -> TrigPoly:
    """Term-wise derivative with respect to tau."""
    w = TWO_PI * np.arange(1, f.N + 1)
    return TrigPoly(0.0, w * f.sin_coeffs, -w * f.cos_coeffs)


def second_derivative(f: TrigPoly) -> TrigPoly:
    w2 = (TWO_PI * np.arange(1, f.N + 1)) ** 2
    return TrigPoly(0.0, -w2 * f.cos_coeffs, -w2 * f.sin_coeffs)


def inner(f: TrigPoly, g: TrigPoly) -> float:
    """Exact L^2 inner product ``int_0^1 f g dtau``."""
    m = min(f.N, g.N)
    return float(f.constant * g.constant
                 + 0.5 * (f.cos_coeffs[:m] @ g.cos_coeffs[:m]
                          + f.sin_coeffs[:m] @ g.sin_coeffs[:m]))


def norm_sq(f: TrigPoly) -> float:
    return inner(f, f)


def _loop_norm_sq(x: TrigPoly) -> float:
    nx = norm_sq(x)
    if nx <= 0.0:
        raise ZeroLoop("the loop x vanishes identically")
    return nx


def weighted_inner(x: TrigPoly, f: TrigPoly, g: TrigPoly) -> float:
    """The loop-dependent metric ``4 ||x||^2 <f, g>``."""
    return 4.0 * _loop_norm_sq(x) * inner(f, g)


def dual_inner(x: TrigPoly, f: TrigPoly, g: TrigPoly) -> float:
    """The dual metric ``<f, g> / (4 ||x||^2)``."""
    return inner(f, g) / (4.0 * _loop_norm_sq(x))


def sample(f: TrigPoly, M: int) -> np.ndarray:
    """Values of ``f`` on the uniform grid ``tau_j = j / M``."""
    return np.asarray(f(np.arange(M) / M), dtype=float).reshape(M)


def from_samples(vals: Iterable[float], N: int, strict: bool = True) -> TrigPoly:
    """Discrete Fourier projection of uniform samples onto modes ``<= N``.

    With ``strict`` the round trip must be lossless, which needs
    ``len(vals) >= 2N + 1``.
    """
    v = np.asarray(list(vals) if not isinstance(vals, np.ndarray) else vals, dtype=float)
    M = v.size
    if M < 2 * N + 1:
        if strict:
            raise InsufficientSamples(f"need at least {2 * N + 1} samples for N={N}, got {M}")
        N = (M - 1) // 2
    X = np.fft.rfft(v)
    return TrigPoly(X[0].real / M, 2.0 * X[1:N + 1].real / M, -2.0 * X[1:N + 1].imag / M)
