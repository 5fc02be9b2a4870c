"""Arithmetic structure of vectors: combinatorial least common denominators.

For a vector v of length N, write D(v) for the vector of pairwise
differences v_i - v_j over i < j in lexicographic order.  The combinatorial
least common denominator at cutoffs (abs_cap, rel_coeff) is

    clcd(v) = inf { scale > 0 :
                    dist(scale * D(v), Z^(N choose 2))
                        < min(rel_coeff * ||scale * D(v)||, abs_cap) }

with the Euclidean norm throughout.  A large denominator means no single
scale makes all pairwise differences simultaneously near-integer, which is
exactly what drives anti-concentration of subset sums of v: the bigger the
denominator, the flatter the distribution of sum_{i in R} v_i over random
fixed-size subsets R.

The solver scans scales on a grid fine enough that a qualifying window of
the guaranteed width cannot be skipped, then refines the first window's
left edge by bisection; it returns the lower end of the final bracket, and
+inf when nothing qualifies below ``max_scale``.  ``oracle_clcd`` is an
independently written dense-scan checker for small N used to cross-validate
the solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "ClcdParams",
    "ArithmeticBudgetError",
    "difference_vector",
    "clcd",
    "oracle_clcd",
    "qclcd",
    "StabilityReport",
    "check_clcd_stability",
    "subset_sum_sample",
    "subset_sum_samples",
    "LevyEstimate",
    "levy_estimate",
    "AnticoncentrationReport",
    "check_anticoncentration",
    "in_clcd_level_set",
]

# Refinement stops when the bracket around the infimum is this tight.
BRACKET_TOL = 1e-12

ORACLE_MAX_DIM = 8


class ArithmeticBudgetError(RuntimeError):
    """A denominator scan would need more grid points than allowed."""


@dataclass(frozen=True)
class ClcdParams:
    """Cutoffs and scan controls for the denominator search.

    ``abs_cap`` caps the accepted lattice distance outright; ``rel_coeff``
    scales the proportional cap.  ``max_scale`` bounds the search; anything
    beyond it reports +inf.  ``grid_step`` overrides the scan step but is
    always clamped to rel_coeff / (10 ||D(v)||) so qualifying windows cannot
    be skipped.
    """

    abs_cap: float
    rel_coeff: float
    max_scale: float = 100.0
    grid_step: float | None = None
    max_points: int = 50_000_000

    def __post_init__(self) -> None:
        if self.abs_cap <= 0:
            raise ValueError("abs_cap must be positive")
        if not 0 < self.rel_coeff < 1:
            raise ValueError("rel_coeff must lie in (0, 1)")
        if self.max_scale <= 0:
            raise ValueError("max_scale must be positive")
        if self.grid_step is not None and self.grid_step <= 0:
            raise ValueError("grid_step must be positive")


def difference_vector(v) -> np.ndarray:
    """Pairwise differences v_i - v_j for i < j, lexicographic order.

    Satisfies ||D(v)||^2 = N ||v||^2 - (sum v)^2, so for unit sum-zero
    vectors ||D(v)|| = sqrt(N).
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("difference vector needs a 1-D vector of length >= 2")
    i, j = np.triu_indices(v.size, k=1)
    return v[i] - v[j]


def _scan_step(params: ClcdParams, dnorm: float) -> float:
    cap = params.rel_coeff / (10.0 * dnorm)
    if params.grid_step is None:
        return cap
    return min(params.grid_step, cap)


def _qualifies_batch(scales: np.ndarray, diffs: np.ndarray, dnorm: float, params: ClcdParams) -> np.ndarray:
    prod = scales[:, None] * diffs[None, :]
    frac = np.abs(prod - np.rint(prod))
    dist = np.sqrt((frac * frac).sum(axis=1))
    cap = np.minimum(params.rel_coeff * scales * dnorm, params.abs_cap)
    return dist < cap


def _qualifies_one(scale: float, diffs: np.ndarray, dnorm: float, params: ClcdParams) -> bool:
    prod = scale * diffs
    frac = np.abs(prod - np.rint(prod))
    dist = math.sqrt(float((frac * frac).sum()))
    return dist < min(params.rel_coeff * scale * dnorm, params.abs_cap)


def clcd(v, params: ClcdParams) -> float:
    """Combinatorial least common denominator of ``v`` (see module docstring).

    Returns the lower end of a bracket of width <= 1e-12 around the left
    edge of the first qualifying window found at or below ``max_scale``,
    or +inf when no scanned scale qualifies.  Constant vectors have no
    qualifying scale at any cutoff (D(v) = 0), hence +inf.
    """
    diffs = difference_vector(v)
    dnorm = float(np.linalg.norm(diffs))
    if dnorm == 0.0:
        return math.inf
    step = _scan_step(params, dnorm)
    total = int(math.ceil(params.max_scale / step))
    if total > params.max_points:
        raise ArithmeticBudgetError(
            f"scan would need {total} points (> {params.max_points}); "
            "raise grid_step, lower max_scale, or raise max_points"
        )
    chunk = max(1, int(4_000_000 // max(1, diffs.size)))
    found = None
    for start in range(1, total + 1, chunk):
        count = min(chunk, total + 1 - start)
        scales = (np.arange(start, start + count, dtype=np.float64)) * step
        scales = scales[scales <= params.max_scale + 1e-15 * params.max_scale]
        if scales.size == 0:
            continue
        hits = np.nonzero(_qualifies_batch(scales, diffs, dnorm, params))[0]
        if hits.size:
            found = float(scales[hits[0]])
            break
    if found is None:
        return math.inf
    lo = max(0.0, found - step)
    hi = found
    while hi - lo > BRACKET_TOL:
        mid = 0.5 * (lo + hi)
        if _qualifies_one(mid, diffs, dnorm, params):
            hi = mid
        else:
            lo = mid
    return lo


def oracle_clcd(v, params: ClcdParams) -> float:
    """Independent dense-scan evaluation of the same infimum (N <= 8 only).

    Scans scales at resolution grid_step / 100 evaluating the defining
    predicate directly, then repeatedly re-scans the bracket around the
    first qualifying point at 100x finer resolution until the bracket is
    1e-12 wide, returning its lower end.  Deliberately written without any
    of the solver's vectorized machinery.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to vectors of length <= {ORACLE_MAX_DIM}")
    if v.size < 2:
        raise ValueError("need at least 2 coordinates")
    diffs = []
    for a in range(v.size):
        for b in range(a + 1, v.size):
            diffs.append(float(v[a]) - float(v[b]))
    dnorm = math.sqrt(sum(x * x for x in diffs))
    if dnorm == 0.0:
        return math.inf

    def qualifies(scale: float) -> bool:
        total = 0.0
        for x in diffs:
            y = scale * x
            f = abs(y - round(y))
            total += f * f
        return math.sqrt(total) < min(params.rel_coeff * scale * dnorm, params.abs_cap)

    res = _scan_step(params, dnorm) / 100.0
    budget = params.max_points
    n_steps = int(math.ceil(params.max_scale / res))
    if n_steps > budget:
        raise ArithmeticBudgetError(f"oracle scan would need {n_steps} points (> {budget})")
    first = None
    scale = res
    k = 1
    while scale <= params.max_scale:
        if qualifies(scale):
            first = scale
            break
        k += 1
        scale = k * res
    if first is None:
        return math.inf
    lo = max(0.0, first - res)
    while res > BRACKET_TOL:
        res = res / 100.0
        hit = None
        m = 1
        scale = lo + res
        while scale <= first + res * 0.5:
            if qualifies(scale):
                hit = scale
                break
            m += 1
            scale = lo + m * res
        if hit is None:
            # the window's edge sits within one old-resolution step of `first`
            hit = first
        first = hit
        lo = max(0.0, first - res)
    return lo


def qclcd(v, family, rank: int, params: ClcdParams) -> float:
    """The rank-th smallest restricted denominator over a family of index sets.

    ``family`` is either a RestrictionFamily or any iterable of index
    collections; the multiset of clcd(v restricted to T) values is formed
    (restrictions with fewer than 2 coordinates contribute +inf, since they
    have no pairwise differences) and its rank-th smallest element returned.
    """
    sets = getattr(family, "sets", family)
    sets = [tuple(int(i) for i in t) for t in sets]
    if not sets:
        raise ValueError("restriction family is empty")
    if not 1 <= rank <= len(sets):
        raise ValueError(f"rank={rank} out of range for family of size {len(sets)}")
    v = np.asarray(v, dtype=np.float64)
    values = []
    for t in sets:
        if len(t) < 2:
            values.append(math.inf)
        else:
            values.append(clcd(v[list(t)], params))
    values.sort()
    return values[rank - 1]


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of :func:`check_clcd_stability`.

    The inequality under test: if ||v - w|| < rel_coeff ||D(v)|| / (5 sqrt(N)),
    then the denominator of w at halved cutoffs is at least
    min(clcd(v), abs_cap / (4 sqrt(N) ||v - w||)).  ``applicable`` records
    the hypothesis; when the right side is +inf (both branches beyond
    max_scale), ``holds`` requires the left side to be +inf as well.
    """

    applicable: bool
    holds: bool
    lhs: float
    rhs: float
    perturbation: float
    threshold: float
    clcd_v: float


def check_clcd_stability(v, w, params: ClcdParams, slack: float = 1e-6) -> StabilityReport:
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape:
        raise ValueError("v and w must have the same shape")
    n = v.size
    diffs = difference_vector(v)
    dnorm = float(np.linalg.norm(diffs))
    pert = float(np.linalg.norm(v - w))
    threshold = params.rel_coeff * dnorm / (5.0 * math.sqrt(n))
    applicable = pert < threshold
    clcd_v = clcd(v, params)
    halved = replace(
        params, abs_cap=params.abs_cap / 2.0, rel_coeff=params.rel_coeff / 2.0, grid_step=None
    )
    lhs = clcd(w, halved)
    cap_term = math.inf if pert == 0.0 else params.abs_cap / (4.0 * math.sqrt(n) * pert)
    rhs = min(clcd_v, cap_term)
    if not applicable:
        holds = True
    elif math.isinf(rhs):
        holds = math.isinf(lhs)
    else:
        holds = lhs >= rhs - slack * max(1.0, rhs)
    return StabilityReport(
        applicable=applicable,
        holds=holds,
        lhs=lhs,
        rhs=rhs,
        perturbation=pert,
        threshold=threshold,
        clcd_v=clcd_v,
    )


def subset_sum_sample(v, subset_size: int, rng: np.random.Generator) -> float:
    """One draw of sum_{i in R} v_i over a uniform subset R of the given size."""
    v = np.asarray(v, dtype=np.float64)
    subset_size = int(subset_size)
    if not 0 <= subset_size <= v.size:
        raise ValueError(f"subset size {subset_size} out of range for length {v.size}")
    if subset_size == 0:
        return 0.0
    idx = rng.choice(v.size, size=subset_size, replace=False)
    return float(v[idx].sum())


def subset_sum_samples(v, subset_size: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent draws of the fixed-size subset sum (vectorized)."""
    v = np.asarray(v, dtype=np.float64)
    subset_size = int(subset_size)
    if not 0 <= subset_size <= v.size:
        raise ValueError(f"subset size {subset_size} out of range for length {v.size}")
    if subset_size == 0:
        return np.zeros(count)
    if subset_size == v.size:
        return np.full(count, float(v.sum()))
    out = np.empty(count, dtype=np.float64)
    chunk = max(1, int(2_000_000 // max(1, v.size)))
    for start in range(0, count, chunk):
        b = min(chunk, count - start)
        keys = rng.random((b, v.size))
        picks = np.argpartition(keys, subset_size - 1, axis=1)[:, :subset_size]
        out[start : start + b] = v[picks].sum(axis=1)
    return out


@dataclass(frozen=True)
class LevyEstimate:
    """Empirical concentration function value at interval radius ``radius``.

    ``estimate`` is the largest fraction of the samples inside any open
    interval of that radius; ``half_width`` is the 99% binomial normal
    half-width for that fraction.
    """

    radius: float
    estimate: float
    sample_count: int
    half_width: float


_Z99 = 2.5758293035489004


def levy_estimate(samples, radius: float) -> LevyEstimate:
    """Sliding-window maximum of the empirical measure of open intervals.

    A set of points fits in an open interval of the given radius iff its
    spread is strictly below twice the radius, so a sorted sweep finds the
    maximum count exactly.  At radius 0 the estimate is 0 by the open
    interval convention.
    """
    s = np.sort(np.asarray(samples, dtype=np.float64))
    if s.size == 0:
        raise ValueError("need at least one sample")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    n = s.size
    if radius == 0.0:
        best = 0
    else:
        ends = np.searchsorted(s, s + 2.0 * radius, side="left")
        best = int((ends - np.arange(n)).max())
    est = best / n
    hw = _Z99 * math.sqrt(max(est * (1.0 - est), 0.0) / n)
    return LevyEstimate(radius=float(radius), estimate=est, sample_count=n, half_width=hw)


@dataclass(frozen=True)
class AnticoncentrationReport:
    """Monte Carlo check that the subset-sum concentration is controlled.

    The bound under test:
        levy(subset sum, radius)
            <= C * (radius + 1/clcd(v) + exp(-8 f (1-f) abs_cap^2 / N))
    with f the subset fraction.  ``c_hat`` is the fitted C (empirical levy
    divided by the bracket); ``applicable`` records the spread hypothesis
    ||D(v)|| >= spread_coeff * sqrt(N / (f (1 - f))).
    """

    applicable: bool
    levy: LevyEstimate
    clcd_value: float
    radius_term: float
    clcd_term: float
    exp_term: float
    c_hat: float


def check_anticoncentration(
    v,
    subset_size: int,
    radius: float,
    params: ClcdParams,
    sample_count: int,
    rng: np.random.Generator,
    spread_coeff: float = 0.4,
) -> AnticoncentrationReport:
    v = np.asarray(v, dtype=np.float64)
    n = v.size
    subset_size = int(subset_size)
    if not 0 < subset_size < n:
        raise ValueError("need 0 < subset_size < N for a two-sided subset size")
    frac = subset_size / n
    diffs = difference_vector(v)
    dnorm = float(np.linalg.norm(diffs))
    applicable = dnorm >= spread_coeff * math.sqrt(n / (frac * (1.0 - frac)))
    value = clcd(v, params)
    samples = subset_sum_samples(v, subset_size, sample_count, rng)
    lev = levy_estimate(samples, radius)
    radius_term = float(radius)
    clcd_term = 0.0 if math.isinf(value) else 1.0 / value
    exp_term = math.exp(-8.0 * frac * (1.0 - frac) * params.abs_cap**2 / n)
    denom = radius_term + clcd_term + exp_term
    c_hat = lev.estimate / denom if denom > 0 else math.inf
    return AnticoncentrationReport(
        applicable=applicable,
        levy=lev,
        clcd_value=value,
        radius_term=radius_term,
        clcd_term=clcd_term,
        exp_term=exp_term,
        c_hat=c_hat,
    )


def in_clcd_level_set(
    x,
    level: float,
    min_norm: float,
    cap_frac: float,
    flat_outlier_frac: float,
    flat_radius: float,
    rel_coeff: float,
    max_scale: float | None = None,
) -> bool:
    """Membership in the denominator level set [level, 2*level].

    Requires x to not be almost constant at (flat_outlier_frac, flat_radius),
    to have norm in [min_norm, 1], and its denominator at cutoffs
    (cap_frac * N, rel_coeff) inside [level, 2*level].
    """
    from .vectorclass import is_almost_constant

    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if level <= 0 or not 0 < min_norm <= 1:
        raise ValueError("need level > 0 and min_norm in (0, 1]")
    if is_almost_constant(x, flat_outlier_frac, flat_radius):
        return False
    norm = float(np.linalg.norm(x))
    if not min_norm <= norm <= 1.0:
        return False
    cap = max_scale if max_scale is not None else 2.5 * level
    value = clcd(x, ClcdParams(abs_cap=cap_frac * n, rel_coeff=rel_coeff, max_scale=cap))
    return level <= value <= 2.0 * level
