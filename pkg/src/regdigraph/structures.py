"""Split/order structures and quasirandomness events for regular matrices.

A *split* is a subset S of the column indices; an *order* is a permutation
of the row indices.  Together they induce, for consecutive rows in the
order, restriction sets: the odd family lives inside the split and the even
family inside its complement, each set being the part of a switching set
falling in the split half.  Vectors whose restrictions to these sets keep
large denominators are the ones whose anti-concentration survives
conditioning, so the checks here feed the rerandomization analysis.

The quasirandomness checks (overlap of switching-set complements, split
intersections of two switching sets, and split weights) are stated for
every tuple of distinct rows; exhaustive enumeration is used when it fits
in the budget and uniform random tuples otherwise, with the coverage
recorded in the report.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .arithmetic import ClcdParams, clcd, difference_vector, qclcd
from .core import RegularDigraphMatrix
from .vectorclass import bispread_constants, certified_spread_constants

__all__ = [
    "SplitMatchPair",
    "RobustFamily",
    "RestrictionFamily",
    "matching_gap_event",
    "split_band_event",
    "generate_robust_family",
    "well_spread_fraction",
    "CheckReport",
    "check_switch_overlap",
    "check_split_intersections",
    "check_split_weights",
    "QuasirandomParams",
    "QuasirandomReport",
    "check_quasirandom",
    "build_restriction_families",
    "check_well_spread",
    "BispreadRestrictionsReport",
    "check_bispread_restrictions",
    "in_qclcd_level_set",
]


# ---------------------------------------------------------------------------
# splits, orders, events


@dataclass(frozen=True)
class SplitMatchPair:
    """A split (sorted column indices) together with a row order."""

    order: tuple[int, ...]
    split: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValueError("order must be a permutation of 0..n-1")
        if list(self.split) != sorted(set(self.split)):
            raise ValueError("split must be sorted and duplicate-free")
        if self.split and (self.split[0] < 0 or self.split[-1] >= n):
            raise ValueError("split indices out of range")
        if len(self.split) != n // 2:
            raise ValueError(f"split must have floor(n/2) = {n // 2} columns, got {len(self.split)}")

    @property
    def n(self) -> int:
        return len(self.order)

    def split_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.split)] = True
        return mask

    def cosplit(self) -> tuple[int, ...]:
        inside = set(self.split)
        return tuple(k for k in range(self.n) if k not in inside)


@dataclass(frozen=True)
class RobustFamily:
    """A finite family of split/order pairs with its band constants.

    ``band = (count_frac, lo, hi)``: the family is meant to guarantee that
    every incompressible sum-zero vector pair (v, w) has some member for
    which v passes the split band event and w the matching gap event at
    these constants.
    """

    pairs: tuple[SplitMatchPair, ...]
    band: tuple[float, float, float]

    @property
    def m(self) -> int:
        return len(self.pairs)


def matching_gap_event(v, order, band: tuple[float, float, float]) -> bool:
    """At least count_frac*N adjacent-in-order gaps of size lo/sqrt(N).

    Counts i with |v[order[i]] - v[order[i+1]]| * sqrt(N) >= lo and
    compares against count_frac * N.  The band's upper edge is unused here;
    it rides along so one triple serves both events.
    """
    v = np.asarray(v, dtype=np.float64)
    order = np.asarray(order, dtype=np.int64)
    n = v.size
    if order.size != n:
        raise ValueError("order length must match vector length")
    count_frac, lo, _ = band
    gaps = np.abs(np.diff(v[order])) * math.sqrt(n)
    return int((gaps >= lo).sum()) >= count_frac * n


def split_band_event(v, split, band: tuple[float, float, float]) -> bool:
    """Band coordinates of both signs on both sides of the split.

    Requires at least count_frac*N indices with v_i sqrt(N) in [lo, hi]
    inside the split and inside its complement, and the same for
    [-hi, -lo] (four conditions).
    """
    v = np.asarray(v, dtype=np.float64)
    n = v.size
    count_frac, lo, hi = band
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(list(split), dtype=np.int64)] = True
    scaled = v * math.sqrt(n)
    pos = (scaled >= lo) & (scaled <= hi)
    neg = (scaled <= -lo) & (scaled >= -hi)
    need = count_frac * n
    return (
        int((pos & mask).sum()) >= need
        and int((pos & ~mask).sum()) >= need
        and int((neg & mask).sum()) >= need
        and int((neg & ~mask).sum()) >= need
    )


def generate_robust_family(
    n: int,
    support_frac: float,
    radius: float,
    num_splits: int,
    num_orders: int,
    rng: np.random.Generator,
    band: tuple[float, float, float] | None = None,
) -> RobustFamily:
    """All pairs of num_splits uniform half-splits with num_orders uniform orders.

    The attached band constants default to the certified chain: the
    one-sided constants for (support_frac, radius)-incompressible vectors,
    folded into two-sided band constants, with the count constant shrunk to
    what survives both the split side conditions (factor 1/3) and the
    gap-pairing argument (quadratic loss).
    """
    if band is None:
        c1, c2, c3 = bispread_constants(*certified_spread_constants(support_frac, radius))
        # split side loses a third of the band count; order side keeps a
        # quarter of the expected (n-1)/2 pairings of banded coordinates
        band = (min(c1 / 3.0, c1 * c1 * (n - 1) / (4.0 * n)), c2, c3)
    splits = []
    for _ in range(num_splits):
        pick = np.sort(rng.permutation(n)[: n // 2])
        splits.append(tuple(int(i) for i in pick))
    orders = [tuple(int(i) for i in rng.permutation(n)) for _ in range(num_orders)]
    pairs = tuple(
        SplitMatchPair(order=ordr, split=spl) for spl in splits for ordr in orders
    )
    return RobustFamily(pairs=pairs, band=tuple(float(x) for x in band))


def well_spread_fraction(density: float, group_size: int) -> float:
    """The spread fraction implied by quasirandomness at the given depth.

    Equals 2 (density^2 + (1-density)^2)^group_size.  The downstream
    argument needs this to fall below density^2 (1-density)^2, which forces
    group_size to grow as the density shrinks; callers should check that
    before relying on the returned value.
    """
    if not 0 < density <= 0.5:
        raise ValueError("density must lie in (0, 1/2]")
    if group_size < 1:
        raise ValueError("group_size must be positive")
    return 2.0 * (density * density + (1.0 - density) * (1.0 - density)) ** group_size


# ---------------------------------------------------------------------------
# packed-bit row utilities


class _PackedRows:
    """Rows packed into uint64 words for cheap XOR/AND + popcount."""

    def __init__(self, entries: np.ndarray):
        n = entries.shape[1]
        bits = np.packbits(entries.astype(np.uint8), axis=1)
        pad = (-bits.shape[1]) % 8
        if pad:
            bits = np.hstack([bits, np.zeros((bits.shape[0], pad), dtype=np.uint8)])
        self.words = bits.view(np.uint64)
        self.n = n
        self.n_words = self.words.shape[1]
        valid = np.zeros(self.n_words * 64, dtype=np.uint8)
        valid[:n] = 1
        self.valid = np.packbits(valid).view(np.uint64)

    @staticmethod
    def pack_mask(mask: np.ndarray) -> np.ndarray:
        bits = np.packbits(mask.astype(np.uint8))
        pad = (-bits.shape[0]) % 8
        if pad:
            bits = np.hstack([bits, np.zeros(pad, dtype=np.uint8)])
        return bits.view(np.uint64)


def _popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1).astype(np.int64)


# ---------------------------------------------------------------------------
# quasirandomness checks


@dataclass(frozen=True)
class CheckReport:
    """Result of a tuple-quantified check.

    ``exhaustive`` says whether every tuple was visited; otherwise
    ``checked`` uniform random tuples were tested out of ``total`` (None
    when the total is astronomically large).  ``witnesses`` holds up to 16
    violating tuples.
    """

    holds: bool
    checked: int
    total: int | None
    exhaustive: bool
    witnesses: tuple[tuple[int, ...], ...]


_TUPLE_CHUNK = 1 << 18


def _distinct_tuples(n: int, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if n < k:
        raise ValueError(f"cannot draw {k} distinct indices from range({n})")
    out = rng.integers(0, n, size=(count, k), dtype=np.int64)
    while True:
        srt = np.sort(out, axis=1)
        bad = (np.diff(srt, axis=1) == 0).any(axis=1)
        idx = np.nonzero(bad)[0]
        if idx.size == 0:
            return out
        out[idx] = rng.integers(0, n, size=(idx.size, k), dtype=np.int64)


def _pairings(items: tuple[int, ...]):
    # all ways to split items into unordered pairs
    if not items:
        yield ()
        return
    first = items[0]
    for i in range(1, len(items)):
        pair = (first, items[i])
        rest = items[1:i] + items[i + 1 :]
        for tail in _pairings(rest):
            yield (pair,) + tail


def check_switch_overlap(
    m: RegularDigraphMatrix,
    depth: int,
    density: float,
    budget: int = 1_000_000,
    rng: np.random.Generator | None = None,
) -> CheckReport:
    """Intersections of depth many switching-set complements stay small.

    For all 2*depth distinct rows paired as (i_1, j_1), ..., the columns
    where every pair agrees must number at most
    2 (density^2 + (1-density)^2)^depth * n.  Exhaustive when the tuple
    count fits the budget, uniform random tuples otherwise.
    """
    n = m.n
    if not 1 <= depth or 2 * depth > n:
        raise ValueError(f"need 1 <= depth and 2*depth <= n, got depth={depth}, n={n}")
    packed = _PackedRows(m.entries)
    bound = 2.0 * (density * density + (1.0 - density) * (1.0 - density)) ** depth * n
    total = _tuple_total(n, depth)
    witnesses: list[tuple[int, ...]] = []
    checked = 0
    if total is not None and total <= budget:
        for combo in itertools.combinations(range(n), 2 * depth):
            for pairing in _pairings(combo):
                checked += 1
                agree = packed.valid.copy()
                for (i, j) in pairing:
                    agree &= ~(packed.words[i] ^ packed.words[j])
                if int(np.bitwise_count(agree).sum()) > bound:
                    if len(witnesses) < 16:
                        witnesses.append(tuple(x for p in pairing for x in p))
        return CheckReport(
            holds=not witnesses, checked=checked, total=total, exhaustive=True, witnesses=tuple(witnesses)
        )
    if rng is None:
        rng = np.random.default_rng(0)
    holds = True
    for start in range(0, budget, _TUPLE_CHUNK):
        batch = min(_TUPLE_CHUNK, budget - start)
        tuples = _distinct_tuples(n, 2 * depth, batch, rng)
        agree = np.broadcast_to(packed.valid, (batch, packed.n_words)).copy()
        for k in range(depth):
            xi = packed.words[tuples[:, 2 * k]]
            xj = packed.words[tuples[:, 2 * k + 1]]
            agree &= ~(xi ^ xj)
        counts = _popcount(agree)
        bad = np.nonzero(counts > bound)[0]
        if bad.size:
            holds = False
            for b in bad:
                if len(witnesses) < 16:
                    witnesses.append(tuple(int(x) for x in tuples[b]))
    return CheckReport(
        holds=holds, checked=budget, total=total, exhaustive=False, witnesses=tuple(witnesses)
    )


def _tuple_total(n: int, depth: int) -> int | None:
    # number of ways to choose 2*depth distinct rows and pair them up
    try:
        total = math.comb(n, 2 * depth)
        total *= math.factorial(2 * depth) // (2**depth * math.factorial(depth))
        return total if total < 10**15 else None
    except OverflowError:  # pragma: no cover
        return None


def check_split_intersections(
    m: RegularDigraphMatrix,
    split,
    density: float,
    budget: int = 1_000_000,
    rng: np.random.Generator | None = None,
) -> CheckReport:
    """Two switching sets always meet both halves of the split substantially.

    For all 4 distinct rows i1, i2, j1, j2: the intersection of the two
    switching sets has at least (2 density (1-density))^2 n / 4 columns
    inside the split and as many inside its complement.
    """
    n = m.n
    packed = _PackedRows(m.entries)
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(list(split), dtype=np.int64)] = True
    s_words = _PackedRows.pack_mask(mask)
    sc_words = ~s_words & packed.valid
    bound = (2.0 * density * (1.0 - density)) ** 2 * n / 4.0
    total = 3 * math.comb(n, 4)
    witnesses: list[tuple[int, ...]] = []
    checked = 0
    if total <= budget:
        for combo in itertools.combinations(range(n), 4):
            for pairing in _pairings(combo):
                checked += 1
                (i1, j1), (i2, j2) = pairing
                x = (packed.words[i1] ^ packed.words[j1]) & (packed.words[i2] ^ packed.words[j2])
                in_s = int(np.bitwise_count(x & s_words).sum())
                in_sc = int(np.bitwise_count(x & sc_words).sum())
                if min(in_s, in_sc) < bound:
                    if len(witnesses) < 16:
                        witnesses.append((i1, j1, i2, j2))
        return CheckReport(
            holds=not witnesses, checked=checked, total=total, exhaustive=True, witnesses=tuple(witnesses)
        )
    if rng is None:
        rng = np.random.default_rng(0)
    holds = True
    for start in range(0, budget, _TUPLE_CHUNK):
        batch = min(_TUPLE_CHUNK, budget - start)
        tuples = _distinct_tuples(n, 4, batch, rng)
        x = (packed.words[tuples[:, 0]] ^ packed.words[tuples[:, 1]]) & (
            packed.words[tuples[:, 2]] ^ packed.words[tuples[:, 3]]
        )
        in_s = _popcount(x & s_words)
        in_sc = _popcount(x & sc_words)
        bad = np.nonzero(np.minimum(in_s, in_sc) < bound)[0]
        if bad.size:
            holds = False
            for b in bad:
                if len(witnesses) < 16:
                    witnesses.append(tuple(int(t) for t in tuples[b]))
    return CheckReport(
        holds=holds, checked=budget, total=total, exhaustive=False, witnesses=tuple(witnesses)
    )


def check_split_weights(m: RegularDigraphMatrix, split) -> CheckReport:
    """Switching weights over the split stay within a sixth of either half.

    For every pair of distinct rows: the absolute row-sum difference over
    the split must not exceed min(|split part|, |complement part|) / 6 of
    the switching set.  All O(n^2) pairs are checked exhaustively.
    """
    n = m.n
    entries = m.entries.astype(np.int64)
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(list(split), dtype=np.int64)] = True
    row_sums_split = entries[:, mask].sum(axis=1)
    weight = np.abs(row_sums_split[:, None] - row_sums_split[None, :])
    packed = _PackedRows(m.entries)
    s_words = _PackedRows.pack_mask(mask)
    sc_words = ~s_words & packed.valid
    witnesses: list[tuple[int, ...]] = []
    checked = 0
    holds = True
    # chunk rows to keep the pairwise XOR cube small
    chunk = max(1, int(2**22 // max(1, n * packed.n_words)))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        x = packed.words[start:stop, None, :] ^ packed.words[None, :, :]
        in_s = _popcount(x & s_words)
        in_sc = _popcount(x & sc_words)
        bound = np.minimum(in_s, in_sc) / 6.0
        viol = weight[start:stop] > bound
        viol[np.arange(start, stop) - start, np.arange(start, stop)] = False
        checked += (stop - start) * n - (stop - start)
        bad = np.argwhere(viol)
        if bad.size:
            holds = False
            for r, c in bad:
                if r + start < c and len(witnesses) < 16:
                    witnesses.append((int(r + start), int(c)))
    return CheckReport(
        holds=holds, checked=checked // 2, total=n * (n - 1) // 2, exhaustive=True, witnesses=tuple(witnesses)
    )


@dataclass(frozen=True)
class QuasirandomParams:
    """Knobs for the combined quasirandomness check.

    ``splits`` is the family of half-splits whose intersection and weight
    conditions are required alongside the depth-wise overlap condition.
    """

    depth: int
    density: float
    splits: tuple[tuple[int, ...], ...] = ()
    budget: int = 1_000_000

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError(f"depth must be positive, got {self.depth}")
        if not 0.0 < self.density <= 0.5:
            raise ValueError(f"density must lie in (0, 1/2], got {self.density}")
        if self.budget < 1:
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class QuasirandomReport:
    """Conjunction of the three tuple checks over a family of splits.

    ``depth_hypothesis`` records whether depth < n^{1/4}, the regime the
    asymptotic statement is made for; the checks run either way.
    """

    holds: bool
    depth_hypothesis: bool
    overlap: CheckReport
    intersections: tuple[CheckReport, ...]
    weights: tuple[CheckReport, ...]


def check_quasirandom(
    m: RegularDigraphMatrix,
    params: QuasirandomParams,
    rng: np.random.Generator | None = None,
) -> QuasirandomReport:
    """Overlap check at the given depth plus, per split, intersections and weights."""
    if rng is None:
        rng = np.random.default_rng(0)
    overlap = check_switch_overlap(m, params.depth, params.density, params.budget, rng)
    inters = tuple(
        check_split_intersections(m, s, params.density, params.budget, rng) for s in params.splits
    )
    weights = tuple(check_split_weights(m, s) for s in params.splits)
    holds = overlap.holds and all(r.holds for r in inters) and all(r.holds for r in weights)
    return QuasirandomReport(
        holds=holds,
        depth_hypothesis=params.depth < m.n**0.25,
        overlap=overlap,
        intersections=inters,
        weights=weights,
    )


# ---------------------------------------------------------------------------
# restriction families


@dataclass(frozen=True)
class RestrictionFamily:
    """An ordered multiset of index sets used to restrict vectors.

    Sets may repeat (multiplicities matter for order statistics).  Empty
    sets are legal but flagged: ``empty_indices`` lists their positions, and
    restricted denominators over sets with fewer than 2 elements are +inf.
    """

    sets: tuple[tuple[int, ...], ...]

    @property
    def t(self) -> int:
        return len(self.sets)

    @property
    def empty_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sets) if not s)

    def __iter__(self):
        return iter(self.sets)


def build_restriction_families(
    m: RegularDigraphMatrix, pair: SplitMatchPair
) -> tuple[RestrictionFamily, RestrictionFamily]:
    """Switching-set restrictions along consecutive rows of the order.

    For i = 1..floor((n-1)/2) (1-based), the odd family collects
    split  intersect  SwitchingSet(row order(2i-1), row order(2i)) and the
    even family the complement's part of SwitchingSet(row order(2i),
    row order(2i+1)).  Both families have exactly floor((n-1)/2) members;
    empty members are kept (and flagged) so multiplicities stay aligned.
    """
    n = m.n
    order = pair.order
    mask = pair.split_mask()
    half = (n - 1) // 2
    odd: list[tuple[int, ...]] = []
    even: list[tuple[int, ...]] = []
    for i in range(half):
        a, b = order[2 * i], order[2 * i + 1]
        differ = m.entries[a] != m.entries[b]
        odd.append(tuple(int(k) for k in np.nonzero(differ & mask)[0]))
        c, e = order[2 * i + 1], order[2 * i + 2]
        differ2 = m.entries[c] != m.entries[e]
        even.append(tuple(int(k) for k in np.nonzero(differ2 & ~mask)[0]))
    return RestrictionFamily(sets=tuple(odd)), RestrictionFamily(sets=tuple(even))


def check_well_spread(
    family: RestrictionFamily,
    universe,
    group_size: int,
    frac: float,
    budget: int = 1_000_000,
    rng: np.random.Generator | None = None,
) -> CheckReport:
    """Well-spreadness of a family over its universe.

    Condition 1: every group_size members jointly cover all but frac * |U|
    of the universe U.  Condition 2: every two members (including a member
    with itself) overlap in at least frac * |U| elements.  Condition 1 is
    exhausted when the subset count fits the budget, otherwise sampled.
    """
    universe = tuple(int(i) for i in universe)
    u_size = len(universe)
    t = family.t
    if not 1 <= group_size <= t:
        raise ValueError(f"need 1 <= group_size <= {t}, got {group_size}")
    pos = {u: k for k, u in enumerate(universe)}
    member_masks = np.zeros((t, u_size), dtype=bool)
    for idx, s in enumerate(family.sets):
        for el in s:
            if el in pos:
                member_masks[idx, pos[el]] = True
    witnesses: list[tuple[int, ...]] = []
    # condition 2 first: all pairs, cheap
    inter = member_masks.astype(np.int64) @ member_masks.astype(np.int64).T
    bad2 = np.argwhere(inter < frac * u_size)
    for i, j in bad2:
        if i <= j and len(witnesses) < 16:
            witnesses.append((int(i), int(j)))
    holds2 = bad2.size == 0
    total1 = math.comb(t, group_size)
    checked = 0
    holds1 = True
    if total1 <= budget:
        for combo in itertools.combinations(range(t), group_size):
            checked += 1
            covered = member_masks[list(combo)].any(axis=0)
            if u_size - int(covered.sum()) > frac * u_size:
                holds1 = False
                if len(witnesses) < 16:
                    witnesses.append(tuple(combo))
        exhaustive = True
    else:
        if rng is None:
            rng = np.random.default_rng(0)
        exhaustive = False
        for _ in range(budget):
            combo = rng.choice(t, size=group_size, replace=False)
            checked += 1
            covered = member_masks[combo].any(axis=0)
            if u_size - int(covered.sum()) > frac * u_size:
                holds1 = False
                if len(witnesses) < 16:
                    witnesses.append(tuple(int(x) for x in combo))
    return CheckReport(
        holds=holds1 and holds2,
        checked=checked + t * t,
        total=total1 + t * t,
        exhaustive=exhaustive,
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# combined restricted-denominator checks


@dataclass(frozen=True)
class BispreadRestrictionsReport:
    """Outcome of :func:`check_bispread_restrictions`.

    ``degenerate_count`` is the number of restriction sets on which the
    vector is nearly flat (tiny restricted difference norm or almost
    constant); the claim is that at most 2*group_size of them can be
    degenerate and that the corresponding order-statistic denominator is
    large (``qclcd_ratio`` reports it in units of sqrt(n)).
    """

    applicable: bool
    holds_degenerate: bool
    degenerate_count: int
    degenerate_bound: int
    qclcd_value: float
    qclcd_ratio: float
    diff_threshold: float


def check_bispread_restrictions(
    x,
    odd_family: RestrictionFamily,
    even_family: RestrictionFamily,
    pair: SplitMatchPair,
    band: tuple[float, float, float],
    frac: float,
    group_size: int,
    params: ClcdParams,
    flat_outlier_frac: float = 0.005,
    flat_radius: float = 0.01,
    budget: int = 20_000,
    rng: np.random.Generator | None = None,
) -> BispreadRestrictionsReport:
    """Degenerate restrictions are few and the order-statistic denominator large.

    Hypotheses (checked, else ``applicable=False``): the odd family is
    well-spread over the split at (group_size, frac), the even family over
    the complement, and x passes the split band event.  Conclusions tested:
    at most 2*group_size sets T in the combined family are degenerate,
    where degenerate means ||D(x|_T)|| below
    sqrt(count_frac * lo * frac / (2 group_size)) * sqrt(n) or x|_T almost
    constant at (flat_outlier_frac, flat_radius); and the
    2*group_size-th smallest restricted denominator, in units of sqrt(n),
    is reported.
    """
    from .vectorclass import is_almost_constant

    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if rng is None:
        rng = np.random.default_rng(0)
    ws_odd = check_well_spread(odd_family, pair.split, group_size, frac, budget, rng)
    ws_even = check_well_spread(even_family, pair.cosplit(), group_size, frac, budget, rng)
    in_band = split_band_event(x, pair.split, band)
    applicable = ws_odd.holds and ws_even.holds and in_band
    count_frac, lo, _ = band
    threshold = math.sqrt(count_frac * lo * frac / (2.0 * group_size)) * math.sqrt(n)
    combined = RestrictionFamily(sets=odd_family.sets + even_family.sets)
    degenerate = 0
    for t in combined.sets:
        if len(t) < 2:
            degenerate += 1
            continue
        sub = x[list(t)]
        if float(np.linalg.norm(difference_vector(sub))) <= threshold or is_almost_constant(
            sub, flat_outlier_frac, flat_radius
        ):
            degenerate += 1
    rank = min(2 * group_size, combined.t)
    value = qclcd(x, combined, rank, params)
    ratio = value / math.sqrt(n) if not math.isinf(value) else math.inf
    return BispreadRestrictionsReport(
        applicable=applicable,
        holds_degenerate=degenerate <= 2 * group_size,
        degenerate_count=degenerate,
        degenerate_bound=2 * group_size,
        qclcd_value=value,
        qclcd_ratio=ratio,
        diff_threshold=threshold,
    )


def in_qclcd_level_set(
    x,
    family: RestrictionFamily,
    group_size: int,
    band: tuple[float, float, float],
    split,
    level: float,
    cap_frac: float,
    rel_coeff: float,
    max_scale: float | None = None,
) -> bool:
    """Membership in the restricted-denominator level set [level, 2*level].

    Requires the split band event and the 2*group_size-th smallest
    restricted denominator at cutoffs (cap_frac * n, rel_coeff) to land in
    [level, 2*level].
    """
    x = np.asarray(x, dtype=np.float64)
    if not split_band_event(x, split, band):
        return False
    cap = max_scale if max_scale is not None else 2.5 * level
    rank = min(2 * group_size, family.t)
    value = qclcd(
        x, family, rank, ClcdParams(abs_cap=cap_frac * x.size, rel_coeff=rel_coeff, max_scale=cap)
    )
    return level <= value <= 2.0 * level
