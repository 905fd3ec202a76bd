"""Discrete Hardy-type inequality evaluators and empirical constants.

Each evaluator computes the left- and right-hand side of one displayed
inequality exactly as written; the asserted comparison direction is
carried as `bound` on the report ("upper": lhs <= C rhs, "lower":
lhs >= C rhs, "two_sided": both).  Ratios are always lhs/rhs.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np

from .sequences import validate_monotone

LEMMA_IDS = (
    "jensen",
    "lp_upper",
    "lp_lower",
    "lp_converse_upper",
    "lp_converse_lower",
    "lp_complete_tail",
    "lp_complete_head",
)


@dataclass(frozen=True)
class HardyParams:
    """Weights and range of one inequality instance."""

    alpha: float
    lam: float
    p: float
    m: int
    n: int

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.p <= 0:
            raise ValueError("p must be positive")
        if not (1 <= self.m < self.n):
            raise ValueError("need 1 <= m < n")


@dataclass(frozen=True)
class RatioReport:
    lemma_id: str
    lhs: float
    rhs: float
    ratio: float | None
    bound: str
    ok: bool = True


@dataclass
class SweepReport:
    lemma_id: str
    bound: str
    ratios: list = field(default_factory=list)
    skipped: int = 0

    @property
    def count(self):
        return len(self.ratios)

    @property
    def ratio_min(self):
        return min(self.ratios) if self.ratios else None

    @property
    def ratio_max(self):
        return max(self.ratios) if self.ratios else None

    @property
    def ratio_median(self):
        return statistics.median(self.ratios) if self.ratios else None

    @property
    def spread(self):
        if not self.ratios or self.ratio_min == 0:
            return None
        return self.ratio_max / self.ratio_min


def inner_tail(seq, lam, mu, n):
    """sum_{nu=mu}^{n} a_nu nu^lam."""
    if not (1 <= mu <= n):
        raise ValueError("need 1 <= mu <= n")
    nu = np.arange(mu, n + 1, dtype=float)
    return float(np.sum(seq.values(mu, n) * nu ** lam))


def _weighted_pieces(seq, hp):
    nu = np.arange(1, hp.n + 1, dtype=float)
    a = seq.values(1, hp.n)
    w = a * nu ** hp.lam          # summand of the inner sums
    point = (a * nu ** (hp.lam + 1)) ** hp.p
    return nu, w, point


def hardy_tail_pair(seq, hp):
    """Both sides of the tail-type comparison on [m, n].

    lhs = sum_{mu=m}^{n} mu^{a-1} (sum_{nu=mu}^{n} a_nu nu^l)^p,
    rhs = sum_{mu=m}^{n} mu^{a-1} (a_mu mu^{l+1})^p.
    """
    nu, w, point = _weighted_pieces(seq, hp)
    tails = np.cumsum(w[::-1])[::-1]  # tails[mu-1] = sum_{nu=mu}^{n} w
    sl = slice(hp.m - 1, hp.n)
    weight = nu[sl] ** (hp.alpha - 1)
    lhs = float(np.sum(weight * tails[sl] ** hp.p))
    rhs = float(np.sum(weight * point[sl]))
    return lhs, rhs


def hardy_head_pair(seq, hp):
    """Both sides of the head-type comparison on [m, n].

    lhs = sum_{mu=m}^{n} mu^{-a-1} (sum_{nu=m}^{mu} a_nu nu^l)^p,
    rhs = sum_{mu=m}^{n} mu^{-a-1} (a_mu mu^{l+1})^p.
    """
    nu, w, point = _weighted_pieces(seq, hp)
    heads = np.cumsum(w[hp.m - 1:])  # heads[j] = sum_{nu=m}^{m+j} w
    sl = slice(hp.m - 1, hp.n)
    weight = nu[sl] ** (-hp.alpha - 1)
    lhs = float(np.sum(weight * heads ** hp.p))
    rhs = float(np.sum(weight * point[sl]))
    return lhs, rhs


def _outer_sum(nu, weight_exp, inner, p, lo, hi):
    sl = slice(lo - 1, hi)
    return float(np.sum(nu[sl] ** weight_exp * inner[sl] ** p))


def _require_monotone(seq, lemma_id):
    res = validate_monotone(seq)
    if not res.ok:
        raise ValueError(f"{lemma_id} needs a monotone sequence: {res.reason}")


def verify_lemma(lemma_id, seq, hp, jensen_exponents=None):
    """Evaluate one inequality instance and return its RatioReport.

    Side conditions (n >= 16m / 4m for the converse bounds, monotone
    sequences where required) are rejected before evaluation.
    """
    if lemma_id not in LEMMA_IDS:
        raise ValueError(f"unknown lemma id: {lemma_id!r}")

    if lemma_id == "jensen":
        lo, hi = jensen_exponents if jensen_exponents else (1.0, 2.0)
        if not 0 < lo < hi:
            raise ValueError("jensen needs exponents 0 < alpha < beta")
        a = seq.values(1, hp.n)
        lhs = float(np.sum(a ** hi) ** (1.0 / hi))
        rhs = float(np.sum(a ** lo) ** (1.0 / lo))
        return _report(lemma_id, lhs, rhs, "upper")

    nu, w, point = _weighted_pieces(seq, hp)
    tails = np.cumsum(w[::-1])[::-1]
    p, m, n = hp.p, hp.m, hp.n

    if lemma_id == "lp_upper":
        lhs, rhs = hardy_tail_pair(seq, hp)
        return _report(lemma_id, lhs, rhs, "upper" if p >= 1 else "lower")

    if lemma_id == "lp_lower":
        lhs, rhs = hardy_head_pair(seq, hp)
        return _report(lemma_id, lhs, rhs, "upper" if p >= 1 else "lower")

    if lemma_id == "lp_converse_upper":
        _require_monotone(seq, lemma_id)
        if p >= 1:
            if n < 16 * m:
                raise ValueError("lp_converse_upper with p >= 1 needs n >= 16m")
            lhs = _outer_sum(nu, hp.alpha - 1, tails, p, m, n)
            rhs = float(np.sum(nu[8 * m - 1:n] ** (hp.alpha - 1) * point[8 * m - 1:n]))
            return _report(lemma_id, lhs, rhs, "lower")
        if n < 4 * m:
            raise ValueError("lp_converse_upper with p <= 1 needs n >= 4m")
        lhs = _outer_sum(nu, hp.alpha - 1, tails, p, 4 * m, n)
        rhs = float(np.sum(nu[m - 1:n] ** (hp.alpha - 1) * point[m - 1:n]))
        return _report(lemma_id, lhs, rhs, "upper")

    if lemma_id == "lp_converse_lower":
        _require_monotone(seq, lemma_id)
        if n < 4 * m:
            raise ValueError("lp_converse_lower needs n >= 4m")
        if p >= 1:
            heads = np.concatenate(([0.0] * (m - 1), np.cumsum(w[m - 1:])))
            lhs = _outer_sum(nu, -hp.alpha - 1, heads, p, m, n)
            rhs = float(np.sum(nu[4 * m - 1:n] ** (-hp.alpha - 1) * point[4 * m - 1:n]))
            return _report(lemma_id, lhs, rhs, "lower")
        # p <= 1: both the outer and the inner sum start at 4m
        heads = np.concatenate(([0.0] * (4 * m - 1), np.cumsum(w[4 * m - 1:])))
        lhs = _outer_sum(nu, -hp.alpha - 1, heads, p, 4 * m, n)
        rhs = float(np.sum(nu[m - 1:n] ** (-hp.alpha - 1) * point[m - 1:n]))
        return _report(lemma_id, lhs, rhs, "upper")

    if lemma_id == "lp_complete_tail":
        _require_monotone(seq, lemma_id)
        lhs = _outer_sum(nu, hp.alpha - 1, tails, p, 1, n)
        rhs = float(np.sum(nu[:n] ** (hp.alpha - 1) * point[:n]))
        return _report(lemma_id, lhs, rhs, "two_sided")

    # lp_complete_head
    _require_monotone(seq, lemma_id)
    heads = np.cumsum(w)
    lhs = _outer_sum(nu, -hp.alpha - 1, heads, p, 1, n)
    rhs = float(np.sum(nu[:n] ** (-hp.alpha - 1) * point[:n]))
    return _report(lemma_id, lhs, rhs, "two_sided")


def _report(lemma_id, lhs, rhs, bound):
    if rhs > 0:
        return RatioReport(lemma_id, lhs, rhs, lhs / rhs, bound)
    # rhs vanished: a genuine violation only if lhs did not
    return RatioReport(lemma_id, lhs, rhs, None, bound, ok=(lhs == 0))


def estimate_constant(lemma_id, cases, jensen_exponents=None):
    """Sweep verify_lemma over (seq, hp) cases and collect ratio statistics.

    Cases whose ratio is undefined (rhs = 0) or whose side conditions
    fail are counted as skipped.
    """
    bound = None
    report = None
    for seq, hp in cases:
        try:
            r = verify_lemma(lemma_id, seq, hp, jensen_exponents=jensen_exponents)
        except ValueError:
            r = None
        if report is None:
            report = SweepReport(lemma_id=lemma_id, bound=r.bound if r else "")
        if r is None or r.ratio is None:
            report.skipped += 1
            continue
        report.bound = r.bound
        report.ratios.append(r.ratio)
    if report is None:
        raise ValueError("estimate_constant needs at least one case")
    return report
