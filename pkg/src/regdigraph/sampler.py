"""Uniform sampling and exhaustive enumeration of regular digraph matrices.

Three methods are exposed through :class:`SamplerConfig`:

* ``enumerate`` - exact uniform choice from the full family, feasible only
  for tiny sizes (the enumeration is cached per ``(n, d)``).
* ``switch-chain`` - the classical 2x2 alternating-rectangle switching walk,
  started from a canonical circulant and run for a configurable burn-in.
  Every step preserves membership, the walk is symmetric, and its stationary
  distribution is uniform.
* ``pair-rejection`` - draw each row independently as a uniform d-subset and
  accept iff all column sums match; only sensible for very small n.

Determinism contract: one draw consumes randomness only from the Generator
passed in (or derived from ``config.seed``), so identical (config, seed)
produce identical draw sequences regardless of platform or worker count.
Per-trial streams are derived as ``seed XOR trial_index``.
"""
from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .core import RegularDigraphMatrix, validate

__all__ = [
    "SamplerError",
    "BudgetExceeded",
    "SamplerConfig",
    "derive_rng",
    "default_burn_in",
    "canonical_start",
    "enumerate_regular",
    "sample_uniform",
    "sample_many",
]

ENUMERATION_NODE_BUDGET = 10_000_000

# Block size for pre-drawn chain proposals; only a speed/memory knob.
_CHAIN_BLOCK = 1 << 16

_METHODS = ("enumerate", "switch-chain", "pair-rejection")


class SamplerError(RuntimeError):
    """Sampling could not be carried out under the configured limits."""


class BudgetExceeded(SamplerError):
    """An enumeration or rejection loop exceeded its node/attempt budget."""


@dataclass(frozen=True)
class SamplerConfig:
    """How to draw from the family of n-by-n d-regular 0/1 matrices.

    ``burn_in=None`` means the default ``20 * n * d``; an explicit 0 is
    allowed but flagged with a warning because the chain then returns the
    canonical start.  ``attempt_cap`` bounds pair-rejection retries.
    """

    n: int
    d: int
    method: str = "switch-chain"
    burn_in: int | None = None
    seed: int = 0
    attempt_cap: int = 100_000

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 <= self.d <= self.n:
            raise ValueError(f"d={self.d} out of range for n={self.n}")
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}, want one of {_METHODS}")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")

    def effective_burn_in(self) -> int:
        if self.burn_in is None:
            return default_burn_in(self.n, self.d)
        return self.burn_in


def default_burn_in(n: int, d: int) -> int:
    return 20 * n * d


def derive_rng(base_seed: int, trial_index: int) -> np.random.Generator:
    """Per-trial stream: a fresh PCG64 generator seeded ``base_seed XOR trial``.

    Trials are therefore embarrassingly parallel with reproducible results
    independent of how they are scheduled.
    """
    return np.random.Generator(np.random.PCG64(int(base_seed) ^ int(trial_index)))


def canonical_start(n: int, d: int) -> RegularDigraphMatrix:
    """The circulant with ones on offsets 0..d-1: a[i, j]=1 iff (j-i) mod n < d."""
    if min(d, n - d) < 1:
        raise SamplerError(f"need 1 <= d <= n-1, got d={d} at n={n}")
    a = np.zeros((n, n), dtype=np.uint8)
    idx = np.arange(n)
    for off in range(d):
        a[idx, (idx + off) % n] = 1
    return validate(a, d)


def enumerate_regular(n: int, d: int, node_budget: int = ENUMERATION_NODE_BUDGET) -> list[RegularDigraphMatrix]:
    """All d-regular matrices in row-major lexicographic order, each exactly once.

    Backtracking over rows with column-capacity pruning: a partial filling is
    abandoned as soon as some column can no longer reach sum d.  Intended for
    n <= 6; larger sizes run under a node budget and raise
    :class:`BudgetExceeded` when the pruned search grows past it.
    """
    if not 0 <= d <= n:
        raise ValueError(f"d={d} out of range for n={n}")
    results: list[RegularDigraphMatrix] = []
    col_count = np.zeros(n, dtype=np.int64)
    rows: list[list[int]] = []
    nodes = 0

    def fill_row(pos: int, ones_left: int, row: list[int]) -> None:
        # Build one row left to right, 0 before 1, so the completed matrices
        # come out in ascending row-major bit order.
        nonlocal nodes
        nodes += 1
        if n > 6 and nodes > node_budget:
            raise BudgetExceeded(f"enumeration exceeded {node_budget} search nodes at n={n}, d={d}")
        if ones_left > n - pos:
            return
        if pos == n:
            emit_row(row)
            return
        # try 0 at pos
        if n - pos - 1 >= ones_left:
            row.append(0)
            fill_row(pos + 1, ones_left, row)
            row.pop()
        # try 1 at pos, only if the column still has capacity
        if ones_left > 0 and col_count[pos] < d:
            col_count[pos] += 1
            row.append(1)
            fill_row(pos + 1, ones_left - 1, row)
            row.pop()
            col_count[pos] -= 1

    def emit_row(row: list[int]) -> None:
        rows.append(list(row))
        r = len(rows)
        rows_left = n - r
        # prune: every column must be fillable by the remaining rows
        if np.all(d - col_count <= rows_left):
            if r == n:
                results.append(validate(np.array(rows, dtype=np.uint8), d))
            else:
                fill_row(0, d, [])
        rows.pop()

    fill_row(0, d, [])
    return results


@functools.lru_cache(maxsize=16)
def _cached_enumeration(n: int, d: int) -> tuple[RegularDigraphMatrix, ...]:
    return tuple(enumerate_regular(n, d))


def _run_chain(entries: np.ndarray, steps: int, n: int, rng: np.random.Generator) -> None:
    # Proposals are drawn in blocks from the caller's generator, one bounded
    # integer per step in mixed radix (n, n-1, n, n-1); the kernel decodes.
    # One scalar-bound draw is an order of magnitude cheaper than four.
    high = n * n * (n - 1) * (n - 1)
    left = steps
    while left > 0:
        block = min(left, _CHAIN_BLOCK)
        draws = rng.integers(0, high, size=block, dtype=np.int64)
        _kernels.chain_steps(entries, draws, n)
        left -= block


def sample_uniform(config: SamplerConfig, rng: np.random.Generator | None = None) -> RegularDigraphMatrix:
    """One draw from the configured family.

    ``enumerate`` is exactly uniform; ``switch-chain`` is approximately
    uniform after burn-in; ``pair-rejection`` is exactly uniform when it
    terminates and raises :class:`BudgetExceeded` past the attempt cap.
    """
    if rng is None:
        rng = derive_rng(config.seed, 0)
    n, d = config.n, config.d
    if min(d, n - d) < 1:
        # degenerate families (a single member) are excluded from sampling
        raise SamplerError(f"sampling needs 1 <= d <= n-1, got d={d} at n={n}")
    if config.method == "enumerate":
        family = _cached_enumeration(n, d)
        if not family:
            raise SamplerError(f"family (n={n}, d={d}) is empty")
        return family[int(rng.integers(len(family)))]
    if config.method == "switch-chain":
        burn = config.effective_burn_in()
        if burn == 0:
            warnings.warn("switch-chain burn_in is 0: the draw is the canonical start", stacklevel=2)
        start = canonical_start(n, d)
        entries = start.entries.copy()
        _run_chain(entries, burn, n, rng)
        return validate(entries, d)
    # pair-rejection
    for _ in range(config.attempt_cap):
        a = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            a[i, rng.choice(n, size=d, replace=False)] = 1
        if (a.sum(axis=0) == d).all():
            return validate(a, d)
    raise BudgetExceeded(f"pair-rejection gave up after {config.attempt_cap} attempts at n={n}, d={d}")


def sample_many(config: SamplerConfig, count: int) -> list[RegularDigraphMatrix]:
    """``count`` draws, trial t using the derived stream ``seed XOR t``."""
    return [sample_uniform(config, derive_rng(config.seed, t)) for t in range(count)]
