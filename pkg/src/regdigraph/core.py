"""Dense 0/1 matrices with all row and column sums equal.

The central object is :class:`RegularDigraphMatrix`: an ``n x n`` array of
bits whose row sums and column sums all equal ``d``.  These are exactly the
adjacency matrices of ``d``-regular digraphs (self-loops allowed, no multiple
edges).  Matrices are immutable after construction so they can be shared
freely between threads and worker processes.

Besides construction/validation this module provides the complement bijection
``A -> J - A``, switching sets (the columns where two rows disagree),
switching weights (signed disagreement counts over a column subset), and a
plain text serialization that round-trips bit for bit.

All indices are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ValidationError",
    "RegularDigraphMatrix",
    "SwitchingSet",
    "validate",
    "complement",
    "switching_set",
    "column_switching_set",
    "switching_weight",
    "to_text",
    "from_text",
    "read_matrix_stream",
    "write_matrix_stream",
]


class ValidationError(ValueError):
    """A candidate matrix violates the regularity contract.

    Every violation is reported, not just the first: ``bad_rows`` and
    ``bad_cols`` hold all offending indices (0-based).  Shape and entry
    problems are described in the message alone.
    """

    def __init__(self, message: str, bad_rows: Iterable[int] = (), bad_cols: Iterable[int] = ()):
        self.bad_rows = tuple(int(i) for i in bad_rows)
        self.bad_cols = tuple(int(i) for i in bad_cols)
        if self.bad_rows or self.bad_cols:
            message = f"{message} (rows {list(self.bad_rows)}, columns {list(self.bad_cols)})"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class RegularDigraphMatrix:
    """An ``n x n`` 0/1 matrix with every row and column summing to ``d``.

    ``entries`` is a read-only ``uint8`` array.  Instances compare equal iff
    their entries are identical (``n`` and ``d`` are then forced anyway) and
    hash by content, so they can key dictionaries and sets.
    """

    n: int
    d: int
    entries: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegularDigraphMatrix):
            return NotImplemented
        return self.n == other.n and self.d == other.d and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.n, self.d, self.entries.tobytes()))

    def key(self) -> bytes:
        """Content key: stable, hashable, cheap to compare."""
        return self.entries.tobytes()

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def dense(self, dtype=np.float64) -> np.ndarray:
        """A writable copy of the entries in the requested dtype."""
        return self.entries.astype(dtype)


def _fresh(entries: np.ndarray, d: int) -> RegularDigraphMatrix:
    # Internal constructor for entries already known to satisfy the contract.
    entries = np.ascontiguousarray(entries, dtype=np.uint8)
    entries.setflags(write=False)
    return RegularDigraphMatrix(n=entries.shape[0], d=int(d), entries=entries)


def validate(entries: object, d: int) -> RegularDigraphMatrix:
    """Check the full regularity contract and wrap the entries.

    Returns the immutable matrix iff ``entries`` is a square 0/1 array whose
    ``2n`` row/column sums all equal ``d``.  Otherwise raises
    :class:`ValidationError` listing every violated row and column index.
    """
    arr = np.asarray(entries)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square 2-D array, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValidationError("entries must all be 0 or 1")
    arr = arr.astype(np.uint8)
    n = arr.shape[0]
    d = int(d)
    if not 0 <= d <= n:
        raise ValidationError(f"degree d={d} impossible for n={n}")
    row_sums = arr.sum(axis=1)
    col_sums = arr.sum(axis=0)
    bad_rows = np.nonzero(row_sums != d)[0]
    bad_cols = np.nonzero(col_sums != d)[0]
    if bad_rows.size or bad_cols.size:
        raise ValidationError(f"row/column sums differ from d={d}", bad_rows, bad_cols)
    return _fresh(arr, d)


def complement(m: RegularDigraphMatrix) -> RegularDigraphMatrix:
    """The complement ``J - A``, a member of the (n-d)-regular family.

    Applying it twice returns the original matrix.
    """
    return _fresh(1 - m.entries, m.n - m.d)


@dataclass(frozen=True)
class SwitchingSet:
    """Positions where two rows (or columns) of a matrix disagree.

    ``indices`` is sorted.  For a valid regular matrix the two rows have
    equal sums, so the number of disagreements is always even.
    """

    i: int
    j: int
    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, k: object) -> bool:
        return k in set(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)

    def complement_indices(self, n: int) -> tuple[int, ...]:
        inside = set(self.indices)
        return tuple(k for k in range(n) if k not in inside)


def switching_set(m: RegularDigraphMatrix, i: int, j: int) -> SwitchingSet:
    """Columns ``k`` with ``a[i, k] != a[j, k]``."""
    if i == j:
        raise ValueError("switching set requires two distinct rows")
    mask = m.entries[i] != m.entries[j]
    return SwitchingSet(i=int(i), j=int(j), indices=tuple(np.nonzero(mask)[0].tolist()))


def column_switching_set(m: RegularDigraphMatrix, i: int, j: int) -> SwitchingSet:
    """Rows ``k`` with ``a[k, i] != a[k, j]`` (the transpose variant)."""
    if i == j:
        raise ValueError("switching set requires two distinct columns")
    mask = m.entries[:, i] != m.entries[:, j]
    return SwitchingSet(i=int(i), j=int(j), indices=tuple(np.nonzero(mask)[0].tolist()))


def switching_weight(m: RegularDigraphMatrix, i: int, j: int, subset: Iterable[int]) -> int:
    """Signed disagreement weight ``sum_{k in subset} (a[i,k] - a[j,k])``.

    Only columns where the rows disagree contribute, so the weight depends on
    ``subset`` only through its intersection with the switching set.  Over
    all columns the weight is 0 because both rows sum to ``d``.
    """
    idx = np.fromiter((int(k) for k in subset), dtype=np.int64)
    if idx.size == 0:
        return 0
    if idx.min() < 0 or idx.max() >= m.n:
        raise ValueError("subset contains out-of-range column indices")
    ri = m.entries[i, idx].astype(np.int64)
    rj = m.entries[j, idx].astype(np.int64)
    return int((ri - rj).sum())


def to_text(m: RegularDigraphMatrix) -> str:
    """Serialize: first line ``n d``, then n lines of n characters 0/1."""
    lines = [f"{m.n} {m.d}"]
    lines.extend("".join("1" if b else "0" for b in row) for row in m.entries)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> RegularDigraphMatrix:
    """Parse the text format produced by :func:`to_text` (validating)."""
    lines = [ln for ln in text.strip().splitlines()]
    if not lines:
        raise ValidationError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValidationError(f"header must be 'n d', got {lines[0]!r}")
    try:
        n, d = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValidationError(f"header must contain two integers, got {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != n:
        raise ValidationError(f"expected {n} rows, got {len(body)}")
    rows = []
    for ln_no, ln in enumerate(body, start=2):
        ln = ln.strip()
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValidationError(f"line {ln_no}: expected {n} characters from {{0,1}}, got {ln!r}")
        rows.append([1 if c == "1" else 0 for c in ln])
    return validate(np.array(rows, dtype=np.uint8), d)


def write_matrix_stream(matrices: Sequence[RegularDigraphMatrix]) -> str:
    """Concatenate text records separated by blank lines."""
    return "\n".join(to_text(m) for m in matrices)


def read_matrix_stream(text: str) -> list[RegularDigraphMatrix]:
    """Parse a blank-line separated stream of text records."""
    chunks = [c for c in text.split("\n\n") if c.strip()]
    return [from_text(c) for c in chunks]
