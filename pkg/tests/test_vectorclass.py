import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regdigraph.vectorclass import (
    bispread_constants,
    certified_spread_constants,
    dist_to_sparse,
    is_almost_constant,
    is_compressible,
    spread_count,
)


def unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def test_dist_to_sparse_basis_vector():
    v = np.zeros(6)
    v[0] = 1.0
    assert dist_to_sparse(v, 1) == 0.0


def test_dist_to_sparse_uniform_half():
    n = 8
    v = np.full(n, 1.0 / math.sqrt(n))
    assert dist_to_sparse(v, n // 2) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_dist_to_sparse_three_four_five():
    assert dist_to_sparse([0.6, 0.8], 1) == pytest.approx(0.6, abs=1e-12)


def test_dist_to_sparse_endpoints():
    v = unit([1.0, 2.0, 2.0])
    assert dist_to_sparse(v, 0) == pytest.approx(1.0, abs=1e-12)
    assert dist_to_sparse(v, 3) == 0.0


@given(
    coords=st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=12),
    k=st.integers(0, 12),
)
@settings(max_examples=60, deadline=None)
def test_dist_to_sparse_monotone_in_k(coords, k):
    v = np.asarray(coords)
    if np.linalg.norm(v) < 1e-6:
        return
    v = unit(v)
    k = min(k, v.size)
    if k < v.size:
        assert dist_to_sparse(v, k) >= dist_to_sparse(v, k + 1) - 1e-12


def test_compressible_basis_vector():
    v = np.zeros(10)
    v[0] = 1.0
    assert is_compressible(v, 0.1, 0.5)


def test_uniform_vector_not_compressible():
    n = 20
    v = np.full(n, 1.0 / math.sqrt(n))
    # residual after zeroing floor(0.1 n) = 2 coords is sqrt(0.9) > 0.5
    assert not is_compressible(v, 0.1, 0.5)


def test_three_four_compressible():
    v = np.zeros(10)
    v[0], v[1] = 0.6, 0.8
    assert is_compressible(v, 0.1, 0.7)  # floor(delta n) = 1, residual 0.6


def test_compressibility_strict_at_boundary():
    v = np.zeros(10)
    v[0], v[1] = 0.8, 0.6
    assert not is_compressible(v, 0.1, 0.6)  # residual exactly 0.6, strict <
    assert is_compressible(v, 0.1, 0.6 + 1e-9)


@given(
    seed=st.integers(0, 1000),
    d1=st.floats(0.05, 0.4),
    d2=st.floats(0.0, 0.5),
    r1=st.floats(0.05, 0.6),
    r2=st.floats(0.0, 0.35),
)
@settings(max_examples=60, deadline=None)
def test_compressible_monotone(seed, d1, d2, r1, r2):
    rng = np.random.default_rng(seed)
    v = unit(rng.standard_normal(16))
    if is_compressible(v, d1, r1):
        assert is_compressible(v, min(d1 + d2, 0.99), min(r1 + r2, 0.99))


def test_constant_vector_almost_constant():
    assert is_almost_constant(np.full(9, 3.7), 0.1, 0.05)


def test_two_point_vector_not_almost_constant():
    v = unit([1.0, -1.0])
    assert not is_almost_constant(v, 0.4, 0.5)


def test_mostly_zero_vector_almost_constant():
    v = np.zeros(20)
    v[0] = 5.0
    assert is_almost_constant(v, 0.1, 0.25)  # 19 >= 18 exact zeros, window at 0


def test_almost_constant_zero_vector_false():
    # the window is open, so a zero-width window holds nothing
    assert not is_almost_constant(np.zeros(4), 0.1, 0.1)


def test_spread_count_two_sided():
    v = unit([1.0, -1.0])
    assert spread_count(v, 0.5, 2.0) == (1, 1)


def test_spread_count_positive_vector_has_no_negatives():
    v = unit(np.arange(1.0, 9.0))
    pos, neg = spread_count(v, 0.01, 10.0)
    assert neg == 0 and pos > 0


def test_spread_count_alternating():
    n = 10
    v = np.array([1.0 if i % 2 == 0 else -1.0 for i in range(n)]) / math.sqrt(n)
    assert spread_count(v, 0.5, 1.5) == (n // 2, n // 2)


def test_spread_count_band_is_closed():
    v = unit([1.0, -1.0])  # coords * sqrt(2) = +-1
    assert spread_count(v, 1.0, 1.0) == (1, 1)


def test_bispread_formula_ones():
    assert bispread_constants(1.0, 1.0, 1.0) == (1.0 / 32.0, 1.0 / 8.0, 4.0)


def test_bispread_formula_mixed():
    assert bispread_constants(2.0, 2.0, 1.0) == (0.5, 0.5, 1.0)


def test_bispread_monotone_as_band_floor_shrinks():
    a = bispread_constants(1.0, 1e-3, 1.0)
    b = bispread_constants(1.0, 1e-6, 1.0)
    assert b[0] < a[0] and b[2] > a[2]


def incompressible_pool(n, support_frac, radius, seed, want=40):
    """Random and structured unit vectors that fail the compressibility test."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < want:
        style = rng.integers(3)
        if style == 0:
            v = rng.standard_normal(n)
        elif style == 1:
            v = rng.standard_normal(n) * rng.uniform(0.1, 3.0, size=n)
        else:
            # heavy head plus a light tail, near the compressibility edge
            v = rng.standard_normal(n) * 0.05
            head = rng.choice(n, size=max(1, n // 8), replace=False)
            v[head] += rng.standard_normal(head.size) * 3.0
        v -= v.mean()
        v = unit(v)
        if not is_compressible(v, support_frac, radius):
            out.append(v)
    return out


@pytest.mark.parametrize("n", [16, 64, 256])
def test_certified_one_sided_spread(n):
    """Every incompressible unit vector has at least count_frac * n
    coordinates with |v_i| sqrt(n) inside the certified band."""
    frac, lo, hi = certified_spread_constants(0.2, 0.1)
    for v in incompressible_pool(n, 0.2, 0.1, seed=n):
        pos, neg = spread_count(v, lo, hi)
        assert pos + neg >= frac * n


@pytest.mark.parametrize("n", [16, 64, 256])
def test_certified_two_sided_spread_sumzero(n):
    """Sum-zero incompressible vectors carry banded coordinates of both
    signs at the two-sided constants."""
    band = bispread_constants(*certified_spread_constants(0.2, 0.1))
    for v in incompressible_pool(n, 0.2, 0.1, seed=1000 + n):
        pos, neg = spread_count(v, band[1], band[2])
        assert pos >= band[0] * n
        assert neg >= band[0] * n


def test_incompressible_never_almost_constant_below_band():
    """With the flatness pair inside the derived band constants, no unit
    sum-zero incompressible vector is almost-constant."""
    band = bispread_constants(*certified_spread_constants(0.2, 0.1))
    flat_frac = band[0] / 2.0
    flat_radius = band[1] / 2.0
    for n in (16, 64):
        for v in incompressible_pool(n, 0.2, 0.1, seed=7 * n):
            assert not is_almost_constant(v, flat_frac, flat_radius)


def test_sumzero_flat_vectors_are_compressible():
    """A sum-zero unit vector that is almost-constant at (0.005, 0.01) is
    always compressible at (0.2, 0.1): with at most 0.005 n outliers of
    total mass <= 1, the window level is pinned near zero, so zeroing the
    top 0.2 n coordinates leaves residual <= 2*0.01 + sqrt(0.005)/0.995."""
    n = 400
    a = 1.0 / math.sqrt(2 * (n - 2))
    v = np.full(n, a)
    v[-2:] = -a * (n - 2) / 2.0
    v = unit(v)
    assert abs(v.sum()) < 1e-9
    assert is_almost_constant(v, 0.005, 0.01)
    assert is_compressible(v, 0.2, 0.1)

    rng = np.random.default_rng(42)
    found = 0
    for _ in range(200):
        w = np.full(n, 1.0) + rng.standard_normal(n) * 1e-4
        k = rng.integers(1, 3)
        w[:k] = rng.uniform(-20, 20, size=k)
        w -= w.mean()
        w = unit(w)
        if not is_almost_constant(w, 0.005, 0.01):
            continue
        found += 1
        assert is_compressible(w, 0.2, 0.1)
    assert found > 50


def test_flat_incompressible_needs_nonzero_sum():
    # without the sum-zero constraint the two classes genuinely meet
    u = np.full(20, 1.0 / math.sqrt(20))
    assert is_almost_constant(u, 0.005, 0.01)
    assert not is_compressible(u, 0.2, 0.1)


def test_certified_constants_positive_and_ordered():
    frac, lo, hi = certified_spread_constants(0.3, 0.05)
    assert 0 < frac < 1
    assert 0 < lo <= hi
