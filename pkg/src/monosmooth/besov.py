"""Class-membership functionals for monotone cosine series.

Three scale functionals are implemented on a common footing:

* I(delta)  -- weighted integral of the modulus of smoothness, evaluated
  through the dyadic-harmonic cell discretization with the t-weight
  integrated in closed form per cell;
* J(n)      -- its discrete counterpart built from omega(1/nu) samples;
* K(n)      -- the purely coefficient-based functional.

Membership verdicts compare a functional against an admissible weight
function phi; they are grid-evidence heuristics, never proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sequences import DIVERGENT, WeightedSumSpec, weighted_sum
from .smoothness import SmoothnessParams, bound_core, modulus_direct

SEMINORM_REL_TOL = 1e-4
NU_CAP = 2 ** 17
#: divergence verdict threshold: remainder bound relative to the partial
#: sum at the cutoff cap
DIVERGENCE_FRACTION = 0.10


@dataclass(frozen=True)
class ClassParams:
    """Smoothness-class parameters (theta, r, lambda, k, p)."""

    theta: float
    r: float
    lam: float
    k: int
    p: float

    def __post_init__(self):
        if min(self.theta, self.r, self.lam) <= 0:
            raise ValueError("theta, r, lambda must be positive")
        if self.k <= self.r + self.lam:
            raise ValueError("need k > r + lambda")
        if not 1 < self.p < math.inf:
            raise ValueError("p must lie in (1, inf)")

    @property
    def smoothness(self):
        return SmoothnessParams(k=self.k, p=self.p)


@dataclass(frozen=True)
class PhiSpec:
    """Admissible weight function, as a closed-form family."""

    variant: str          # "power" | "constant" | "power_log"
    alpha: float = 0.0
    c: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.variant == "power":
            if self.alpha <= 0:
                raise ValueError("power phi needs alpha > 0")
        elif self.variant == "constant":
            if self.c <= 0:
                raise ValueError("constant phi needs c > 0")
        elif self.variant == "power_log":
            if self.alpha <= 0:
                raise ValueError("power-log phi needs alpha > 0")
        else:
            raise ValueError(f"unknown phi variant: {self.variant!r}")

    @classmethod
    def power(cls, alpha):
        return cls(variant="power", alpha=alpha)

    @classmethod
    def constant(cls, c=1.0):
        return cls(variant="constant", c=c)

    @classmethod
    def power_log(cls, alpha, gamma):
        return cls(variant="power_log", alpha=alpha, gamma=gamma)

    def __call__(self, delta):
        return phi_eval(self, delta)

    def to_json(self):
        if self.variant == "power":
            return {"variant": "power", "alpha": self.alpha}
        if self.variant == "constant":
            return {"variant": "constant", "c": self.c}
        return {"variant": "power_log", "alpha": self.alpha, "gamma": self.gamma}


def phi_eval(phi, delta):
    """phi(delta) for delta in (0, 1)."""
    delta = np.asarray(delta, dtype=float)
    if np.any((delta <= 0) | (delta >= 1)):
        raise ValueError("phi is evaluated on (0, 1) only")
    if phi.variant == "power":
        out = delta ** phi.alpha
    elif phi.variant == "constant":
        out = np.full_like(delta, phi.c)
    else:
        out = delta ** phi.alpha * (1.0 + np.abs(np.log(delta))) ** phi.gamma
    return float(out) if out.shape == () else out


def phi_validate(phi, grid):
    """Empirical almost-increasing and doubling constants of phi.

    C1 = max over grid pairs d1 <= d2 of phi(d1)/phi(d2);
    C2 = max over the grid of phi(2 d)/phi(d), for grid in (0, 1/2].
    """
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size == 0 or grid[0] <= 0 or grid[-1] > 0.5:
        raise ValueError("grid must lie in (0, 1/2]")
    v = phi_eval(phi, grid)
    v = np.atleast_1d(v)
    if np.all(v == 0):
        raise ValueError("phi vanishes identically on the grid")
    run_max = np.maximum.accumulate(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        c1 = float(np.nanmax(run_max / v))
    doubled = np.atleast_1d(phi_eval(phi, np.minimum(2.0 * grid, 1.0 - 1e-12)))
    c2 = float(np.max(doubled / v))
    return c1, c2


class CoreModulusSource:
    """omega(1/nu) surrogate built from the coefficient core E(nu)."""

    nu_cap = NU_CAP

    def __init__(self, seq, params):
        self.seq = seq
        self.params = params
        self._pref = np.array([], dtype=float)
        self._far = np.array([], dtype=float)
        self._divergent = weighted_sum(
            seq, WeightedSumSpec(q=params.p, s=params.p - 2, m=1)) == DIVERGENT

    def _fill(self, top):
        lo = self._pref.size + 1
        if top < lo:
            return
        k, p = self.params.k, self.params.p
        nu = np.arange(lo, top + 1, dtype=float)
        terms = self.seq.values(lo, top) ** p * nu ** ((k + 1) * p - 2)
        base = self._pref[-1] if self._pref.size else 0.0
        self._pref = np.concatenate([self._pref, base + np.cumsum(terms)])

    def _fill_far(self, top):
        # far[nu-1] = sum_{mu > nu} a_mu^p mu^{p-2}, summed backwards from
        # an extended horizon with an analytic remainder beyond it, so the
        # relative accuracy holds at every nu (no large-total subtraction)
        if self._far.size >= top:
            return
        p = self.params.p
        top2 = max(4 * top, 4096)
        rem = weighted_sum(self.seq, WeightedSumSpec(q=p, s=p - 2, m=top2 + 1))
        nu = np.arange(1, top2 + 1, dtype=float)
        terms = self.seq.values(1, top2) ** p * nu ** (p - 2)
        tails = np.concatenate([np.cumsum(terms[::-1])[::-1][1:], [0.0]])
        self._far = tails[:top] + rem

    def batch(self, nus):
        nus = np.asarray(nus, dtype=int)
        if self._divergent:
            return np.full(nus.shape, DIVERGENT)
        top = int(nus.max())
        self._fill(top)
        self._fill_far(top)
        k, p = self.params.k, self.params.p
        near = self._pref[nus - 1]
        far = self._far[nus - 1]
        return nus ** (-float(k)) * near ** (1.0 / p) + far ** (1.0 / p)

    def __call__(self, nu):
        return float(self.batch(np.array([nu]))[0])


class DirectModulusSource:
    """Memoized direct moduli omega(1/nu) on integer reciprocals.

    The series horizon grows with nu (truncation error of the p = 2
    Parseval norm decays like (nu/horizon)^3 for power-law tails).
    """

    def __init__(self, seq, params, H=64, horizon_factor=8,
                 min_horizon=1024, horizon_cap=32768, nu_cap=2048):
        self.seq = seq
        self.params = params
        self.H = H
        self.horizon_factor = horizon_factor
        self.min_horizon = min_horizon
        self.horizon_cap = horizon_cap
        self.nu_cap = nu_cap
        self._memo = {}

    def _horizon_for(self, nu):
        return int(min(self.horizon_cap,
                       max(self.min_horizon, self.horizon_factor * nu)))

    def batch(self, nus):
        nus = np.asarray(nus, dtype=int)
        missing = sorted({int(v) for v in nus} - self._memo.keys())
        if missing:
            self._fill(np.asarray(missing))
        return np.array([self._memo[int(v)] for v in nus])

    def _fill(self, nus):
        k, p = self.params.k, self.params.p
        if p != 2:
            from .smoothness import QuadratureSpec
            quad = QuadratureSpec(H=max(16, self.H))
            for v in nus:
                horizon = self._horizon_for(int(v))
                self._memo[int(v)] = modulus_direct(
                    self.seq, horizon, self.params, 1.0 / v, quad)
            return
        H = self.H
        # process in blocks sharing one horizon, chunked to bound memory
        for block in np.array_split(nus, max(1, nus.size // 512)):
            horizon = self._horizon_for(int(block.max()))
            a2 = self.seq.values(1, horizon) ** 2
            mu = np.arange(1, horizon + 1, dtype=float)
            hs = (np.arange(1, H + 1, dtype=float)[None, :] / H
                  / block[:, None]).ravel()
            best = np.empty(hs.size)
            chunk = max(1, (2 ** 22) // horizon)
            for lo in range(0, hs.size, chunk):
                part = hs[lo:lo + chunk]
                amp = np.abs(2.0 * np.sin(0.5 * np.multiply.outer(part, mu)))
                best[lo:lo + chunk] = (amp ** (2 * k)) @ a2
            best = best.reshape(block.size, H).max(axis=1)
            for v, g in zip(block, best):
                self._memo[int(v)] = math.sqrt(math.pi * g)

    def __call__(self, nu):
        return float(self.batch(np.array([nu]))[0])


def _source_batch(source, nus):
    if hasattr(source, "batch"):
        return np.asarray(source.batch(nus), dtype=float)
    return np.array([float(source(int(v))) for v in nus])


def extrapolated_tail_sum(term, start, rel_tol=SEMINORM_REL_TOL, cap=NU_CAP):
    """Sum term(nu) for nu >= start with a power-fit remainder.

    Terms are summed in doubling blocks; the remainder beyond the cutoff
    is estimated by integral comparison against the power law fitted to
    the last block.  Returns DIVERGENT when the fitted decay exponent
    stays at or below 1 up to the cap, or when the remainder bound still
    exceeds DIVERGENCE_FRACTION of the partial value there.
    """
    total = 0.0
    lo = start
    width = max(64, start)
    qexp = None
    rem = None
    while True:
        hi = min(lo + width, cap)
        nu = np.arange(lo, hi, dtype=float)
        tv = term(nu.astype(int))
        if np.any(~np.isfinite(tv)):
            return DIVERGENT
        total += float(tv.sum())
        first, last = float(tv[0]), float(tv[-1])
        if last == 0.0:
            return total
        if first > 0 and hi - 1 > lo:
            qexp = math.log(first / last) / math.log((hi - 1) / lo)
        if qexp is not None and qexp > 1.0 + 1e-6:
            rem = last * (hi - 1) / (qexp - 1.0)
            if rem <= rel_tol * (total + rem):
                return total + rem
        if hi >= cap:
            if qexp is None or qexp <= 1.0 + 1e-6:
                return DIVERGENT
            if rem is not None and rem > DIVERGENCE_FRACTION * total:
                return DIVERGENT
            return total + (rem or 0.0)
        lo = hi
        width *= 2


def integral_seminorm(seq, cp, delta, source, rel_tol=SEMINORM_REL_TOL):
    """I(delta): cell-discretized weighted integral of omega^theta.

    The t-weight is integrated in closed form on each cell
    [1/(nu+1), 1/nu], with omega evaluated at 1/nu; partial end cells
    are truncated at delta.  Returns DIVERGENT if the small-t part fails
    to converge.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    th = cp.theta
    c1 = cp.r * th
    c2 = (cp.r + cp.lam) * th
    nu0 = math.ceil(1.0 / delta)
    cap = min(getattr(source, "nu_cap", NU_CAP), NU_CAP)

    # small-t piece: cells at and beyond nu0, top cell clipped at delta
    w_top = ((nu0 + 1) ** c1 - delta ** (-c1)) / c1
    top_val = _source_batch(source, np.array([nu0]))[0]
    if not math.isfinite(top_val):
        return DIVERGENT
    s1 = top_val ** th * w_top

    def term(nus):
        om = _source_batch(source, nus)
        nus = nus.astype(float)
        return om ** th * ((nus + 1) ** c1 - nus ** c1) / c1

    rest = extrapolated_tail_sum(term, nu0 + 1, rel_tol=rel_tol, cap=cap)
    if rest == DIVERGENT:
        return DIVERGENT
    s1 += rest

    # large-t piece: cells 1 .. nu0-1, bottom cell clipped at delta
    s2 = 0.0
    if nu0 > 1:
        nus = np.arange(1, nu0, dtype=int)
        om = _source_batch(source, nus)
        if np.any(~np.isfinite(om)):
            return DIVERGENT
        nuf = nus.astype(float)
        w2 = ((nuf + 1) ** c2 - nuf ** c2) / c2
        w2[-1] = (delta ** (-c2) - (nu0 - 1) ** c2) / c2
        s2 = float(np.sum(om ** th * w2))

    return (s1 + delta ** (cp.lam * th) * s2) ** (1.0 / th)


def discrete_seminorm(seq, cp, n, source, rel_tol=SEMINORM_REL_TOL):
    """J(n): discrete seminorm built from omega(1/nu) samples."""
    if n < 1:
        raise ValueError("n must be >= 1")
    th = cp.theta
    cap = min(getattr(source, "nu_cap", NU_CAP), NU_CAP)

    def term(nus):
        om = _source_batch(source, nus)
        return om ** th * nus.astype(float) ** (cp.r * th - 1)

    far = extrapolated_tail_sum(term, n + 1, rel_tol=rel_tol, cap=cap)
    if far == DIVERGENT:
        return DIVERGENT
    nus = np.arange(1, n + 1, dtype=int)
    om = _source_batch(source, nus)
    if np.any(~np.isfinite(om)):
        return DIVERGENT
    near = float(np.sum(om ** th * nus.astype(float) ** ((cp.r + cp.lam) * th - 1)))
    return (far + n ** (-cp.lam * th) * near) ** (1.0 / th)


def coefficient_functional(seq, cp, n):
    """K(n): the coefficient-based functional, via weighted sums."""
    if n < 1:
        raise ValueError("n must be >= 1")
    th, p = cp.theta, cp.p
    e_far = cp.r * th + th - th / p - 1
    e_near = e_far + cp.lam * th
    far = weighted_sum(seq, WeightedSumSpec(q=th, s=e_far, m=n + 1))
    if far == DIVERGENT:
        return DIVERGENT
    near = weighted_sum(seq, WeightedSumSpec(q=th, s=e_near, m=1, n=n))
    return (far + n ** (-cp.lam * th) * near) ** (1.0 / th)


@dataclass
class MembershipReport:
    functional: str
    grid: list
    values: list
    ratios: list
    sup_ratio: float | None
    verdict: str  # "bounded" | "unbounded" | "divergent"
    meta: dict = field(default_factory=dict)

    @property
    def in_class(self):
        return self.verdict == "bounded"


#: stabilization rule: running sup may grow by at most this fraction
#: over the last doubling of n to still count as bounded
STABILIZATION_TOL = 1e-2


def membership_test(seq, cp, phi, functional="K", n_grid=None, source=None,
                    rel_tol=SEMINORM_REL_TOL):
    """Grid-evidence verdict on sup_n functional(n)/phi(1/n).

    functional is one of "I", "J", "K"; for "I" the scale is
    delta_n = 1/(n+1).  A divergent functional value yields the
    "divergent" verdict immediately.
    """
    if functional not in ("I", "J", "K"):
        raise ValueError("functional must be one of I, J, K")
    if n_grid is None:
        n_grid = [2 ** j for j in range(1, 13)]
    n_grid = sorted(int(n) for n in n_grid)
    if functional in ("I", "J") and source is None:
        source = CoreModulusSource(seq, cp.smoothness)
    if phi.variant == "power" and phi.alpha >= cp.lam:
        raise ValueError("power phi needs alpha < lambda")

    values = []
    for n in n_grid:
        if functional == "K":
            v = coefficient_functional(seq, cp, n)
        elif functional == "J":
            v = discrete_seminorm(seq, cp, n, source, rel_tol=rel_tol)
        else:
            v = integral_seminorm(seq, cp, 1.0 / (n + 1), source, rel_tol=rel_tol)
        if v == DIVERGENT:
            return MembershipReport(functional, n_grid, values + [DIVERGENT],
                                    [], None, "divergent")
        values.append(v)

    ratios = [v / phi_eval(phi, 1.0 / n) for v, n in zip(values, n_grid)]
    sup_ratio = max(ratios)
    # bounded iff the running sup stabilized: either its growth over the
    # last doubling of n is already below tolerance, or that growth has
    # visibly decayed since the middle of the grid (slowly converging
    # families such as the critical power laws)
    run = np.maximum.accumulate(ratios)
    growth = run[1:] / run[:-1] - 1.0 if len(run) > 1 else np.array([0.0])
    g_last = float(growth[-1])
    g_mid = float(growth[len(growth) // 2])
    verdict = "bounded" if (
        g_last < STABILIZATION_TOL
        or (len(growth) >= 4 and g_mid > 0 and g_last <= 0.7 * g_mid)
    ) else "unbounded"
    return MembershipReport(functional, n_grid, values, ratios, sup_ratio, verdict)


@dataclass
class Band:
    name: str
    ratios: list

    @property
    def lo(self):
        return min(self.ratios) if self.ratios else None

    @property
    def hi(self):
        return max(self.ratios) if self.ratios else None

    @property
    def spread(self):
        return self.hi / self.lo if self.ratios and self.lo > 0 else None

    def to_json(self):
        return {"name": self.name, "min": self.lo, "max": self.hi,
                "spread": self.spread, "ratios": list(self.ratios)}


def equivalence_report(seq, cp, n_grid, source=None, rel_tol=SEMINORM_REL_TOL):
    """Ratio bands J(n)/I(1/(n+1)), K(n)/J(n), omega(1/n)/E(n) over a grid.

    Each band's spread (max/min) is the empirical stand-in for the
    two-sided equivalence constants.  Divergent entries are skipped.
    """
    n_grid = sorted(int(n) for n in n_grid)
    if source is None:
        source = DirectModulusSource(seq, cp.smoothness, H=16)
    ji, kj, we = [], [], []
    values = {"n": n_grid, "I": [], "J": [], "K": [], "omega": [], "E": []}
    for n in n_grid:
        jv = discrete_seminorm(seq, cp, n, source, rel_tol=rel_tol)
        iv = integral_seminorm(seq, cp, 1.0 / (n + 1), source, rel_tol=rel_tol)
        kv = coefficient_functional(seq, cp, n)
        ev = bound_core(seq, cp.smoothness, n)
        wv = float(_source_batch(source, np.array([n]))[0])
        values["I"].append(iv)
        values["J"].append(jv)
        values["K"].append(kv)
        values["omega"].append(wv)
        values["E"].append(ev)
        if DIVERGENT not in (jv, iv) and iv > 0:
            ji.append(jv / iv)
        if DIVERGENT not in (kv, jv) and jv > 0:
            kj.append(kv / jv)
        if ev != DIVERGENT and ev > 0:
            we.append(wv / ev)
    return {
        "values": values,
        "bands": {
            "JI": Band("J/I", ji),
            "KJ": Band("K/J", kj),
            "wE": Band("omega/E", we),
        },
    }
