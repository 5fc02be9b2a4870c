"""Conditional rerandomization of a regular matrix along a split/order pair.

Fixing a split of the columns and an order on the rows, the *revealed
information* of a matrix consists of every row's sum over each half of the
split, the entrywise sums of consecutive row pairs (odd pairs restricted to
the split, even pairs to its complement), and the two boundary row
restrictions that the pairing misses.  Conditioned on all of that, the only
remaining randomness is, per pair, which of the two rows carries the 1 in
each column where the pair sum equals 1; those columns form the pair's
restriction set, and the conditional law is uniform over assignments with
the correct row sums.

``resample_conditional`` redraws exactly that randomness, so its output is
a uniform sample from the revealed-information fiber containing the input;
``enumerate_extensions`` lists the whole fiber for small instances and is
the oracle the resampler is tested against.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import RegularDigraphMatrix, _fresh, validate
from .structures import SplitMatchPair

__all__ = [
    "RevealedInformation",
    "RerandomBudgetError",
    "extract_revealed",
    "resample_conditional",
    "enumerate_extensions",
]

ENUMERATION_CELL_BUDGET = 24


class RerandomBudgetError(RuntimeError):
    """The fiber is too large to enumerate exhaustively."""


@dataclass(frozen=True)
class RevealedInformation:
    """Everything about a matrix that conditioning keeps fixed.

    ``row_sums_split`` / ``row_sums_cosplit`` are indexed by actual row
    number (not order position).  ``odd_pair_sums[i]`` is the entrywise sum
    of the rows at order positions 2i and 2i+1 restricted to the sorted
    split (length floor(n/2)); ``even_pair_sums[i]`` the sum of rows at
    positions 2i+1 and 2i+2 on the sorted complement (length
    floor((n-1)/2)).  ``first_row_cosplit`` is the first-ordered row on the
    complement; ``last_row_tail`` is the last-ordered row on the split when
    n is odd and on the complement when n is even (the halves the pairings
    miss).
    """

    pair: SplitMatchPair
    row_sums_split: tuple[int, ...]
    row_sums_cosplit: tuple[int, ...]
    odd_pair_sums: tuple[tuple[int, ...], ...]
    even_pair_sums: tuple[tuple[int, ...], ...]
    first_row_cosplit: tuple[int, ...]
    last_row_tail: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.pair.n
        split = self.pair.split
        cosplit = self.pair.cosplit()
        order = self.pair.order
        if len(self.row_sums_split) != n or len(self.row_sums_cosplit) != n:
            raise ValueError("row sum vectors must have length n")
        degrees = {
            self.row_sums_split[i] + self.row_sums_cosplit[i] for i in range(n)
        }
        if len(degrees) > 1:
            raise ValueError(f"inconsistent row degrees: {sorted(degrees)}")
        if len(self.odd_pair_sums) != n // 2:
            raise ValueError("need floor(n/2) odd pair sums")
        if len(self.even_pair_sums) != (n - 1) // 2:
            raise ValueError("need floor((n-1)/2) even pair sums")
        for i, ps in enumerate(self.odd_pair_sums):
            if len(ps) != len(split):
                raise ValueError(f"odd pair sum {i} has wrong length")
            if any(x not in (0, 1, 2) for x in ps):
                raise ValueError(f"odd pair sum {i} has entries outside 0..2")
            a, b = order[2 * i], order[2 * i + 1]
            if sum(ps) != self.row_sums_split[a] + self.row_sums_split[b]:
                raise ValueError(f"odd pair sum {i} inconsistent with row sums")
        for i, ps in enumerate(self.even_pair_sums):
            if len(ps) != len(cosplit):
                raise ValueError(f"even pair sum {i} has wrong length")
            if any(x not in (0, 1, 2) for x in ps):
                raise ValueError(f"even pair sum {i} has entries outside 0..2")
            a, b = order[2 * i + 1], order[2 * i + 2]
            if sum(ps) != self.row_sums_cosplit[a] + self.row_sums_cosplit[b]:
                raise ValueError(f"even pair sum {i} inconsistent with row sums")
        if len(self.first_row_cosplit) != len(cosplit):
            raise ValueError("first boundary row has wrong length")
        if any(x not in (0, 1) for x in self.first_row_cosplit):
            raise ValueError("boundary rows must be 0/1")
        if sum(self.first_row_cosplit) != self.row_sums_cosplit[order[0]]:
            raise ValueError("first boundary row inconsistent with row sums")
        tail_cols = split if n % 2 else cosplit
        tail_sums = self.row_sums_split if n % 2 else self.row_sums_cosplit
        if len(self.last_row_tail) != len(tail_cols):
            raise ValueError("last boundary row has wrong length")
        if any(x not in (0, 1) for x in self.last_row_tail):
            raise ValueError("boundary rows must be 0/1")
        if sum(self.last_row_tail) != tail_sums[order[n - 1]]:
            raise ValueError("last boundary row inconsistent with row sums")

    @property
    def degree(self) -> int:
        return self.row_sums_split[0] + self.row_sums_cosplit[0]

    def odd_free_columns(self, i: int) -> tuple[int, ...]:
        """Columns of odd pair i where the pair sum is 1 (its restriction set)."""
        split = self.pair.split
        return tuple(split[k] for k, x in enumerate(self.odd_pair_sums[i]) if x == 1)

    def even_free_columns(self, i: int) -> tuple[int, ...]:
        """Columns of even pair i where the pair sum is 1."""
        cosplit = self.pair.cosplit()
        return tuple(cosplit[k] for k, x in enumerate(self.even_pair_sums[i]) if x == 1)


def extract_revealed(m: RegularDigraphMatrix, pair: SplitMatchPair) -> RevealedInformation:
    """Read the conditioning data off a matrix exactly."""
    n = m.n
    if pair.n != n:
        raise ValueError(f"pair is for n={pair.n}, matrix has n={n}")
    ent = m.entries.astype(np.int64)
    order = pair.order
    split = np.asarray(pair.split, dtype=np.int64)
    cosplit = np.asarray(pair.cosplit(), dtype=np.int64)
    sums_split = ent[:, split].sum(axis=1) if split.size else np.zeros(n, dtype=np.int64)
    sums_cosplit = ent[:, cosplit].sum(axis=1) if cosplit.size else np.zeros(n, dtype=np.int64)
    odd = []
    for i in range(n // 2):
        a, b = order[2 * i], order[2 * i + 1]
        odd.append(tuple(int(x) for x in ent[a, split] + ent[b, split]))
    even = []
    for i in range((n - 1) // 2):
        a, b = order[2 * i + 1], order[2 * i + 2]
        even.append(tuple(int(x) for x in ent[a, cosplit] + ent[b, cosplit]))
    tail_cols = split if n % 2 else cosplit
    return RevealedInformation(
        pair=pair,
        row_sums_split=tuple(int(x) for x in sums_split),
        row_sums_cosplit=tuple(int(x) for x in sums_cosplit),
        odd_pair_sums=tuple(odd),
        even_pair_sums=tuple(even),
        first_row_cosplit=tuple(int(x) for x in ent[order[0], cosplit]),
        last_row_tail=tuple(int(x) for x in ent[order[n - 1], tail_cols]),
    )


def _redraw_pair(
    out: np.ndarray, a: int, b: int, free: np.ndarray, rng: np.random.Generator
) -> None:
    """Uniformly reassign which of rows a, b carries the 1 on the free columns.

    The difference's sum over the free columns is kept at its current
    value, so both row sums are preserved.
    """
    t = free.size
    if t == 0:
        return
    s = int(out[a, free].astype(np.int64).sum() - out[b, free].astype(np.int64).sum())
    if abs(s) > t or (t + s) % 2:
        raise ValueError(f"infeasible pair state: {t} free columns, difference sum {s}")
    npos = (t + s) // 2
    out[a, free] = 0
    out[b, free] = 1
    chosen = rng.choice(free, size=npos, replace=False) if npos else free[:0]
    out[a, chosen] = 1
    out[b, chosen] = 0


def resample_conditional(
    m: RegularDigraphMatrix, pair: SplitMatchPair, rng: np.random.Generator
) -> RegularDigraphMatrix:
    """Uniform redraw of the matrix given its revealed information.

    Every consecutive pair's restriction set is reassigned independently
    and uniformly among the assignments with the same restricted row sums;
    all revealed cells stay exactly as they were.
    """
    n = m.n
    if pair.n != n:
        raise ValueError(f"pair is for n={pair.n}, matrix has n={n}")
    out = m.entries.copy()
    order = pair.order
    mask = pair.split_mask()
    for i in range(n // 2):
        a, b = order[2 * i], order[2 * i + 1]
        free = np.nonzero((out[a] != out[b]) & mask)[0]
        _redraw_pair(out, a, b, free, rng)
    for i in range((n - 1) // 2):
        a, b = order[2 * i + 1], order[2 * i + 2]
        free = np.nonzero((out[a] != out[b]) & ~mask)[0]
        _redraw_pair(out, a, b, free, rng)
    return _fresh(out, m.d)


def enumerate_extensions(rev: RevealedInformation) -> list[RegularDigraphMatrix]:
    """Every matrix with the given revealed information, each exactly once.

    Reconstructs all cells the conditioning determines, then takes the
    product over pairs of all placements of the required number of ones on
    each restriction set.  Refuses when the total count of free cells
    exceeds ``ENUMERATION_CELL_BUDGET``.
    """
    pair = rev.pair
    n = pair.n
    order = pair.order
    split = pair.split
    cosplit = pair.cosplit()
    base = np.full((n, n), 2, dtype=np.uint8)

    slots: list[tuple[int, int, tuple[int, ...], int]] = []

    def settle(a: int, b: int, cols, sums, sum_a: int, sum_b: int) -> None:
        free = []
        for col, x in zip(cols, sums):
            if x == 0:
                base[a, col] = 0
                base[b, col] = 0
            elif x == 2:
                base[a, col] = 1
                base[b, col] = 1
            else:
                free.append(col)
        t = len(free)
        diff = sum_a - sum_b
        if abs(diff) > t or (t + diff) % 2:
            raise ValueError(f"infeasible pair state: {t} free columns, difference sum {diff}")
        slots.append((a, b, tuple(free), (t + diff) // 2))

    for i in range(n // 2):
        a, b = order[2 * i], order[2 * i + 1]
        settle(a, b, split, rev.odd_pair_sums[i], rev.row_sums_split[a], rev.row_sums_split[b])
    for i in range((n - 1) // 2):
        a, b = order[2 * i + 1], order[2 * i + 2]
        settle(
            a, b, cosplit, rev.even_pair_sums[i], rev.row_sums_cosplit[a], rev.row_sums_cosplit[b]
        )
    for col, x in zip(cosplit, rev.first_row_cosplit):
        base[order[0], col] = x
    tail_cols = split if n % 2 else cosplit
    for col, x in zip(tail_cols, rev.last_row_tail):
        base[order[n - 1], col] = x

    free_cells = sum(len(s[2]) for s in slots)
    if free_cells > ENUMERATION_CELL_BUDGET:
        raise RerandomBudgetError(
            f"{free_cells} free cells exceed the enumeration budget of {ENUMERATION_CELL_BUDGET}"
        )
    # the undetermined cells must be exactly the slots' free cells
    undecided = base == 2
    expected = np.zeros((n, n), dtype=bool)
    for a, b, free, _ in slots:
        for col in free:
            expected[a, col] = True
            expected[b, col] = True
    if not (undecided == expected).all():
        raise AssertionError("reconstruction does not cover the matrix exactly")

    degree = rev.degree
    out: list[RegularDigraphMatrix] = []
    choice_lists = [list(itertools.combinations(s[2], s[3])) for s in slots]
    for assignment in itertools.product(*choice_lists):
        filled = base.copy()
        for (a, b, free, _), chosen in zip(slots, assignment):
            chosen_set = set(chosen)
            for col in free:
                hit = col in chosen_set
                filled[a, col] = 1 if hit else 0
                filled[b, col] = 0 if hit else 1
        validate(filled, degree)
        out.append(_fresh(filled, degree))
    return out
