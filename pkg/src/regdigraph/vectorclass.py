"""Vector classes: compressible, almost-constant, and coordinate spread.

A unit vector is *compressible* at (support_frac, radius) when it lies
within radius of a vector supported on at most floor(support_frac * N)
coordinates, and *almost constant* when all but outlier_frac * N
coordinates sit inside an open window of half-width radius * ||v|| /
sqrt(N) around a common value.  Vectors in neither class have many
coordinates of both signs at scale 1/sqrt(N); the functions here count
such coordinates and produce the certified band constants.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "dist_to_sparse",
    "is_compressible",
    "is_almost_constant",
    "spread_count",
    "bispread_constants",
    "certified_spread_constants",
]


def dist_to_sparse(v, k: int) -> float:
    """Exact Euclidean distance from ``v`` to the set of k-sparse vectors.

    Equals the norm of the vector with its k largest-magnitude coordinates
    removed (the nearest k-sparse vector keeps exactly those).
    """
    v = np.asarray(v, dtype=np.float64)
    k = int(k)
    if k < 0:
        raise ValueError("sparsity k must be nonnegative")
    if k >= v.size:
        return 0.0
    mags = np.sort(np.abs(v))[::-1]
    return float(np.linalg.norm(mags[k:]))


def is_compressible(v, support_frac: float, radius: float) -> bool:
    """Within radius of some floor(support_frac*N)-sparse vector (strict)."""
    v = np.asarray(v, dtype=np.float64)
    _check_unit_interval(support_frac, "support_frac")
    _check_unit_interval(radius, "radius")
    k = math.floor(support_frac * v.size)
    return dist_to_sparse(v, k) < radius


def is_almost_constant(v, outlier_frac: float, radius: float) -> bool:
    """True iff >= (1-outlier_frac) N coords lie within radius*||v||/sqrt(N) of one value.

    The window is open (strict inequality).  Constant vectors are always
    almost constant; so is any vector for radius large enough.
    """
    v = np.asarray(v, dtype=np.float64)
    _check_unit_interval(outlier_frac, "outlier_frac")
    _check_unit_interval(radius, "radius")
    n = v.size
    if n == 0:
        return True
    needed = (1.0 - outlier_frac) * n
    if needed <= 0:
        return True
    half_width = radius * float(np.linalg.norm(v)) / math.sqrt(n)
    if half_width == 0.0:
        return False  # open window of zero width holds no coordinate
    # coordinates fit in some open window of half-width `half_width` iff
    # their spread is < 2*half_width; scan sorted windows with two pointers
    s = np.sort(v)
    best = 0
    lo = 0
    for hi in range(n):
        while s[hi] - s[lo] >= 2.0 * half_width:
            lo += 1
        best = max(best, hi - lo + 1)
    return best >= needed


def spread_count(v, band_lo: float, band_hi: float) -> tuple[int, int]:
    """Count coordinates in the positive and negative bands.

    Returns ``(pos, neg)`` where pos counts i with v_i * sqrt(N) inside the
    closed band [band_lo, band_hi] and neg counts v_i * sqrt(N) inside
    [-band_hi, -band_lo].
    """
    v = np.asarray(v, dtype=np.float64)
    if not 0 < band_lo <= band_hi:
        raise ValueError(f"need 0 < band_lo <= band_hi, got ({band_lo}, {band_hi})")
    scaled = v * math.sqrt(v.size)
    pos = int(((scaled >= band_lo) & (scaled <= band_hi)).sum())
    neg = int(((scaled <= -band_lo) & (scaled >= -band_hi)).sum())
    return pos, neg


def bispread_constants(
    count_frac: float, band_lo: float, band_hi: float
) -> tuple[float, float, float]:
    """Turn one-sided band constants into two-sided ones.

    If every relevant unit vector has >= count_frac * N coordinates with
    |v_i| sqrt(N) in [band_lo, band_hi], then every *sum-zero* such vector
    has >= c1 * N coordinates in the band [c2, c3] on both the positive and
    the negative side, with

        c1 = min(count_frac / 2, count_frac^2 band_lo^2 / 32)
        c2 = min(count_frac band_lo / 8, band_lo)
        c3 = max(band_hi, 4 / (count_frac band_lo))

    (The heavier side keeps half the original count; the opposite side is
    recovered from the zero-sum constraint via Cauchy-Schwarz.)
    """
    if min(count_frac, band_lo, band_hi) <= 0:
        raise ValueError("band constants must be positive")
    c1 = min(count_frac / 2.0, count_frac * count_frac * band_lo * band_lo / 32.0)
    c2 = min(count_frac * band_lo / 8.0, band_lo)
    c3 = max(band_hi, 4.0 / (count_frac * band_lo))
    return c1, c2, c3


def certified_spread_constants(support_frac: float, radius: float) -> tuple[float, float, float]:
    """Band constants valid for every incompressible unit vector.

    For any unit v with dist_to_sparse(v, floor(support_frac*N)) >= radius
    and support_frac * N >= 1, at least (support_frac radius^2 / 4) N
    coordinates satisfy radius/sqrt(2) <= |v_i| sqrt(N) <= sqrt(2/support_frac):

    * coordinates below the floor threshold radius/sqrt(2N) carry less than
      radius^2/2 of the tail mass, so the band keeps mass >= radius^2/2;
    * every tail coordinate is at most the k-th largest magnitude, which is
      <= 1/sqrt(k) <= sqrt(2/(support_frac N)) since k = floor(support_frac N)
      >= support_frac N / 2.

    These are conservative; configs may override with tighter measured
    values, but only this triple is safe on adversarial inputs.
    """
    _check_unit_interval(support_frac, "support_frac")
    _check_unit_interval(radius, "radius")
    count_frac = support_frac * radius * radius / 4.0
    band_lo = radius / math.sqrt(2.0)
    band_hi = math.sqrt(2.0 / support_frac)
    return count_frac, band_lo, band_hi


def _check_unit_interval(x: float, name: str) -> None:
    if not 0 < x < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {x}")
