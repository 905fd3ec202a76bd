"""Finite differences and moduli of smoothness for truncated cosine series.

Norm convention: ||g||_p = (int_0^{2pi} |g|^p dx)^{1/p}, with no 1/(2pi)
factor.  All two-sided comparisons in this package carry unspecified
constants, so the convention only rescales the reported bands; it is
recorded in every report header.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sequences import DIVERGENT, WeightedSumSpec, weighted_sum

NORM_CONVENTION = "Lp integral over [0, 2pi), no 1/(2pi) normalization"


@dataclass(frozen=True)
class SmoothnessParams:
    """Difference order k and integrability exponent p."""

    k: int
    p: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("difference order k must be >= 1")
        if self.p <= 0:
            raise ValueError("p must be positive")


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform grids: M sample points on [0, 2pi), H shift samples on (0, t]."""

    M: int = 8192
    H: int = 64

    def __post_init__(self):
        if self.M < 2 or self.M & (self.M - 1):
            raise ValueError("M must be a power of two")
        if self.H < 16:
            raise ValueError("H must be >= 16")


@dataclass
class ModulusCurve:
    t: np.ndarray
    omega: np.ndarray
    params: SmoothnessParams
    quad: QuadratureSpec
    horizon: int = 0
    meta: dict = field(default_factory=dict)


def synthesize(seq, horizon, x):
    """Partial cosine series sum_{nu=1}^{horizon} a_nu cos(nu x)."""
    a = seq.values(1, horizon)
    nu = np.arange(1, horizon + 1, dtype=float)
    x = np.asarray(x, dtype=float)
    return np.cos(np.multiply.outer(x, nu)) @ a


def k_difference(seq, horizon, k, h, x):
    """k-th difference: sum_{j=0}^{k} (-1)^(k-j) C(k,j) f(x + j h)."""
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=float)
    for j in range(k + 1):
        out += (-1) ** (k - j) * math.comb(k, j) * synthesize(seq, horizon, x + j * h)
    return out if out.shape else float(out)


def _amplitudes(a, nu, k, h):
    # per-harmonic amplitude of the k-th difference of cos(nu x)
    return a * np.abs(2.0 * np.sin(0.5 * nu * h)) ** k


def lp_norm(seq, horizon, k, h, p, quad=QuadratureSpec(), method="auto"):
    """L^p norm of the k-th difference, on the uniform M-point grid.

    For p = 2 the grid sum is evaluated through Parseval (exact for the
    trigonometric polynomial at hand whenever M exceeds twice the
    horizon); pass method="grid" to force the literal grid sum.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    a = seq.values(1, horizon)
    nu = np.arange(1, horizon + 1, dtype=float)
    if p == 2 and method == "auto":
        amp = _amplitudes(a, nu, k, h)
        return float(math.sqrt(math.pi * np.sum(amp ** 2)))
    M = quad.M
    if M <= 2 * horizon:
        raise ValueError("quadrature grid too coarse: need M > 2 * horizon")
    spec = np.zeros(M, dtype=complex)
    spec[1:horizon + 1] = a * (np.exp(1j * nu * h) - 1.0) ** k
    vals = np.real(np.fft.ifft(spec) * M)
    return float((2.0 * math.pi / M * np.sum(np.abs(vals) ** p)) ** (1.0 / p))


def modulus_direct(seq, horizon, params, t, quad=QuadratureSpec(), method="auto"):
    """omega(f; t)_p: max of ||Delta_h^k f||_p over h in {t i/H, i=1..H}.

    Only positive shifts are sampled: the series is even, so the norm is
    invariant under h -> -h (checked numerically in the test suite).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    k, p = params.k, params.p
    hs = t * np.arange(1, quad.H + 1, dtype=float) / quad.H
    if p == 2 and method == "auto":
        a = seq.values(1, horizon)
        nu = np.arange(1, horizon + 1, dtype=float)
        amp2 = (a ** 2)[None, :] * np.abs(
            2.0 * np.sin(0.5 * np.multiply.outer(hs, nu))
        ) ** (2 * k)
        return float(math.sqrt(math.pi * np.max(amp2.sum(axis=1))))
    return max(lp_norm(seq, horizon, k, h, p, quad, method=method) for h in hs)


def modulus_curve(seq, horizon, params, t_grid, quad=QuadratureSpec()):
    t = np.asarray(t_grid, dtype=float)
    omega = np.array([modulus_direct(seq, horizon, params, ti, quad) for ti in t])
    return ModulusCurve(t=t, omega=omega, params=params, quad=quad, horizon=horizon)


def bound_core(seq, params, n):
    """Coefficient core E(n) of the two-sided modulus estimate.

    E(n) = n^{-k} (sum_{nu<=n} a_nu^p nu^{(k+1)p-2})^{1/p}
         + (sum_{nu>n} a_nu^p nu^{p-2})^{1/p}.

    Returns DIVERGENT when the infinite tail sum diverges.
    """
    k, p = params.k, params.p
    if n < 1:
        raise ValueError("n must be >= 1")
    near = weighted_sum(seq, WeightedSumSpec(q=p, s=(k + 1) * p - 2, m=1, n=n))
    far = weighted_sum(seq, WeightedSumSpec(q=p, s=p - 2, m=n + 1))
    if far == DIVERGENT:
        return DIVERGENT
    return n ** (-float(k)) * near ** (1.0 / p) + far ** (1.0 / p)


def modulus_bounds(seq, params, n):
    """Lower/upper sandwich cores for omega(1/n); both equal E(n)."""
    e = bound_core(seq, params, n)
    return e, e


def auto_horizon(seq, rel=1e-6, cap=65536):
    """Smallest horizon whose uniform-norm tail bound sum a_nu is below
    `rel` of the retained coefficient mass.  Returns (horizon, reached)."""
    tail = seq.tail
    n = seq.horizon
    if tail.to_json()["variant"] == "zero" or getattr(tail, "c", 0) == 0:
        return n, True
    if not tail.converges(1.0, 0.0):
        return cap, False
    kept = float(np.sum(seq.values(1, n)))
    while n < cap:
        rest = tail.integral(1.0, 0.0, n + 0.5)
        if rest <= rel * max(kept, rest):
            return n, True
        n2 = min(2 * n, cap)
        kept += float(np.sum(tail.value(np.arange(n + 1, n2 + 1))))
        n = n2
    return cap, tail.integral(1.0, 0.0, cap + 0.5) <= rel * kept
