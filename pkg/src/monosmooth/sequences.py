"""Monotone coefficient sequences with analytic tail models.

A sequence stores a finite head a_1..a_N and a tail model describing
a_nu for nu > N, so that infinite weighted sums of the form
sum a_nu^q nu^s can be evaluated (or recognised as divergent).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

#: Sentinel returned by sum evaluators when the series diverges.
DIVERGENT = math.inf

_SUM_REL_TOL = 1e-9
_SUM_NU_CAP = 2 ** 23


@dataclass(frozen=True)
class ZeroTail:
    """Coefficients vanish beyond the stored horizon."""

    def value(self, nu):
        return np.zeros_like(np.asarray(nu, dtype=float))

    def converges(self, q, s):
        return True

    def integral(self, q, s, x0):
        return 0.0

    def to_json(self):
        return {"variant": "zero"}


@dataclass(frozen=True)
class PowerLawTail:
    """a_nu = c * nu**(-beta) for nu beyond the horizon."""

    c: float
    beta: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("power-law tail needs c >= 0")
        if self.beta <= 0:
            raise ValueError("power-law tail needs beta > 0")

    def value(self, nu):
        return self.c * np.asarray(nu, dtype=float) ** (-self.beta)

    def converges(self, q, s):
        return self.c == 0 or q * self.beta - s > 1

    def integral(self, q, s, x0):
        # closed form of int_x0^inf (c x^-beta)^q x^s dx
        a = q * self.beta - s
        return self.c ** q * x0 ** (1 - a) / (a - 1)

    def to_json(self):
        return {"variant": "power_law", "c": self.c, "beta": self.beta}


@dataclass(frozen=True)
class PowerLogTail:
    """a_nu = c * nu**(-beta) * (1 + ln nu)**(-gamma)."""

    c: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("power-log tail needs c >= 0")
        if self.beta <= 0:
            raise ValueError("power-log tail needs beta > 0")
        if self.beta + self.gamma < 0:
            # otherwise values eventually increase
            raise ValueError("power-log tail needs beta + gamma >= 0")

    def value(self, nu):
        nu = np.asarray(nu, dtype=float)
        return self.c * nu ** (-self.beta) * (1.0 + np.log(nu)) ** (-self.gamma)

    def converges(self, q, s):
        if self.c == 0:
            return True
        a = q * self.beta - s
        if a > 1:
            return True
        return a == 1 and q * self.gamma > 1

    def integral(self, q, s, x0):
        # int_x0^inf (c x^-b (1+ln x)^-g)^q x^s dx, substituting u = 1 + ln x
        a = q * self.beta - s
        g = q * self.gamma
        u0 = 1.0 + math.log(x0)
        if a == 1:
            return self.c ** q * u0 ** (1 - g) / (g - 1)
        val, _ = quad(
            lambda u: math.exp((1 - a) * (u - 1)) * u ** (-g),
            u0, math.inf,
        )
        return self.c ** q * val

    def to_json(self):
        return {
            "variant": "power_log",
            "c": self.c,
            "beta": self.beta,
            "gamma": self.gamma,
        }


def tail_from_json(doc):
    variant = doc.get("variant")
    if variant == "zero":
        return ZeroTail()
    if variant == "power_law":
        return PowerLawTail(c=doc["c"], beta=doc["beta"])
    if variant == "power_log":
        return PowerLogTail(c=doc["c"], beta=doc["beta"], gamma=doc["gamma"])
    raise ValueError(f"unknown tail variant: {variant!r}")


@dataclass(frozen=True)
class CoefficientSequence:
    """Cosine coefficients: finite head (1-based) plus a tail model."""

    head: tuple
    tail: ZeroTail | PowerLawTail | PowerLogTail = ZeroTail()

    def __post_init__(self):
        if len(self.head) < 1:
            raise ValueError("head must store at least one coefficient")
        object.__setattr__(self, "head", tuple(float(a) for a in self.head))

    @property
    def horizon(self):
        return len(self.head)

    def value(self, nu):
        if nu < 1:
            raise ValueError("indices start at nu = 1")
        if nu <= self.horizon:
            return self.head[nu - 1]
        return float(self.tail.value(nu))

    def values(self, m, n):
        """Array of a_m .. a_n (inclusive, 1-based)."""
        if m < 1 or n < m:
            raise ValueError(f"bad index range [{m}, {n}]")
        nu = np.arange(m, n + 1)
        out = np.empty(nu.shape, dtype=float)
        in_head = nu <= self.horizon
        out[in_head] = np.asarray(self.head, dtype=float)[nu[in_head] - 1]
        if not in_head.all():
            out[~in_head] = self.tail.value(nu[~in_head])
        return out

    def scaled(self, s):
        """Sequence with every coefficient multiplied by s >= 0."""
        if s < 0:
            raise ValueError("scale factor must be nonnegative")
        head = tuple(s * a for a in self.head)
        tail = self.tail
        if isinstance(tail, PowerLawTail):
            tail = PowerLawTail(c=s * tail.c, beta=tail.beta)
        elif isinstance(tail, PowerLogTail):
            tail = PowerLogTail(c=s * tail.c, beta=tail.beta, gamma=tail.gamma)
        return CoefficientSequence(head=head, tail=tail)

    def to_json(self):
        return {"head": list(self.head), "tail": self.tail.to_json()}

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(head=tuple(doc["head"]), tail=tail_from_json(doc["tail"]))


def make_power_law(c, beta, horizon):
    """Sequence a_nu = c * nu**(-beta) with an analytic power-law tail."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if c < 0:
        raise ValueError("c must be nonnegative")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    nu = np.arange(1, horizon + 1, dtype=float)
    head = tuple(c * nu ** (-beta))
    if c == 0:
        return CoefficientSequence(head=head, tail=ZeroTail())
    return CoefficientSequence(head=head, tail=PowerLawTail(c=c, beta=beta))


def make_power_log(c, beta, gamma, horizon):
    """Sequence a_nu = c * nu**(-beta) * (1 + ln nu)**(-gamma)."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    tail = PowerLogTail(c=c, beta=beta, gamma=gamma)
    nu = np.arange(1, horizon + 1)
    head = tuple(tail.value(nu))
    if c == 0:
        return CoefficientSequence(head=head, tail=ZeroTail())
    return CoefficientSequence(head=head, tail=tail)


def make_random_monotone(rng, size, scale=1.0):
    """Random nonincreasing nonnegative head (sorted uniforms), zero tail."""
    head = np.sort(rng.uniform(0.0, scale, size=size))[::-1]
    return CoefficientSequence(head=tuple(head), tail=ZeroTail())


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    index: int | None = None
    reason: str | None = None


def validate_monotone(seq):
    """Check a_nu >= a_{nu+1} >= 0 across the head and the tail junction.

    Returns a ValidationResult; `index` is the first (1-based) position
    violating nonnegativity or monotonicity.
    """
    head = np.asarray(seq.head, dtype=float)
    neg = np.nonzero(head < 0)[0]
    if neg.size:
        i = int(neg[0]) + 1
        return ValidationResult(False, i, f"a_{i} < 0")
    rising = np.nonzero(np.diff(head) > 0)[0]
    if rising.size:
        i = int(rising[0]) + 2
        return ValidationResult(False, i, f"a_{i} > a_{i - 1}")
    n = seq.horizon
    junction = float(seq.tail.value(n + 1))
    if junction > head[-1]:
        return ValidationResult(
            False, n + 1, f"tail value at nu={n + 1} exceeds a_{n}"
        )
    return ValidationResult(True)


@dataclass(frozen=True)
class WeightedSumSpec:
    """Parameters of the sum over nu in [m, n] of a_nu**q * nu**s.

    n is None for an infinite upper limit.
    """

    q: float
    s: float
    m: int = 1
    n: int | None = None

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError("exponent q must be positive")
        if self.m < 1:
            raise ValueError("range must start at m >= 1")
        if self.n is not None and self.n < self.m:
            raise ValueError("empty range")


def weighted_sum(seq, spec, rel_tol=_SUM_REL_TOL):
    """Evaluate sum over [m, n] of a_nu**q * nu**s.

    Infinite ranges are summed directly until an integral-comparison
    remainder drops below `rel_tol`, then closed with the tail model's
    analytic integral.  Divergent series return DIVERGENT (math.inf).
    """
    q, s, m, n = spec.q, spec.s, spec.m, spec.n
    if n is not None:
        nu = np.arange(m, n + 1, dtype=float)
        vals = seq.values(m, n)
        return float(np.sum(vals ** q * nu ** s))

    tail = seq.tail
    if not tail.converges(q, s):
        return DIVERGENT

    total = 0.0
    horizon = seq.horizon
    if m <= horizon:
        nu = np.arange(m, horizon + 1, dtype=float)
        total += float(np.sum(seq.values(m, horizon) ** q * nu ** s))
    start = max(m, horizon + 1)
    if isinstance(tail, ZeroTail) or tail.c == 0:
        return total

    def block(lo, hi):
        nu = np.arange(lo, hi, dtype=float)
        return float(np.sum(tail.value(nu) ** q * nu ** s))

    # partial sum to a growing cutoff plus the midpoint-corrected integral
    lo = start
    width = 1024
    est = None
    while True:
        hi = min(lo + width, _SUM_NU_CAP)
        total += block(lo, hi)
        prev, est = est, total + tail.integral(q, s, hi - 0.5)
        if prev is not None and abs(est - prev) <= rel_tol * abs(est):
            return est
        if hi >= _SUM_NU_CAP:
            return est
        lo = hi
        width *= 2
