import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regdigraph.core import complement
from regdigraph.sampler import SamplerConfig, canonical_start, derive_rng, sample_uniform
from regdigraph.spectral import (
    SpectralError,
    distance_to_rowspan,
    restricted_smallest,
    row_distance_bound,
    smallest_singular,
    sumzero_basis,
)


def draw(n, d, seed=0):
    return sample_uniform(SamplerConfig(n=n, d=d), derive_rng(seed, 0))


@pytest.mark.parametrize("n", [2, 5, 11])
def test_identity_smin(n):
    res = smallest_singular(np.eye(n))
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(res.right) == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.norm(res.left) == pytest.approx(1.0, abs=1e-10)


def test_j_is_singular():
    assert smallest_singular(np.ones((3, 3))).value == pytest.approx(0.0, abs=1e-12)


def test_circulant_4_2_singular():
    # eigenvalues 1 + i^k over 4th roots of unity include 0, so sMin = 0
    m = canonical_start(4, 2)
    assert smallest_singular(m.dense()).value == pytest.approx(0.0, abs=1e-12)


def test_singular_vector_residuals():
    m = draw(10, 3, seed=4)
    res = smallest_singular(m.dense())
    a = m.dense()
    assert abs(np.linalg.norm(a @ res.right) - res.value) <= 1e-6 * max(1.0, res.value)
    assert abs(np.linalg.norm(a.T @ res.left) - res.value) <= 1e-6 * max(1.0, res.value)


def test_sign_convention_largest_coordinate_positive():
    m = draw(8, 3, seed=2)
    res = smallest_singular(m.dense())
    for vec in (res.right, res.left):
        assert vec[np.argmax(np.abs(vec))] > 0


def test_tol_validation():
    with pytest.raises(ValueError):
        smallest_singular(np.eye(3), tol=1e-3)
    with pytest.raises(ValueError):
        smallest_singular(np.eye(3), tol=0.0)


def test_non_finite_rejected():
    bad = np.eye(3)
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        smallest_singular(bad)


def test_sumzero_basis_orthonormal():
    for n in (2, 5, 9):
        b = sumzero_basis(n)
        assert b.shape == (n, n - 1)
        assert np.allclose(b.T @ b, np.eye(n - 1), atol=1e-12)
        assert np.allclose(np.ones(n) @ b, 0.0, atol=1e-12)


def test_restricted_identity():
    assert restricted_smallest(np.eye(6)) == pytest.approx(1.0, abs=1e-12)


def test_restricted_j_is_zero():
    assert restricted_smallest(np.ones((5, 5))) == pytest.approx(0.0, abs=1e-12)


def test_restricted_at_least_global():
    for seed in range(3):
        a = draw(9, 3, seed=seed).dense()
        assert restricted_smallest(a) >= smallest_singular(a).value - 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_complement_identity_on_sumzero(seed):
    """||Ax|| = ||(J-A)x|| on the sum-zero sphere, so the restricted
    smallest singular values agree."""
    m = draw(12, 5, seed=seed)
    a = m.dense()
    c = complement(m).dense()
    assert abs(restricted_smallest(a) - restricted_smallest(c)) <= 1e-9 * m.n
    rng = derive_rng(seed, 99)
    x = rng.standard_normal(m.n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    assert np.linalg.norm(a @ x) == pytest.approx(np.linalg.norm(c @ x), abs=1e-9)


def test_distance_to_rowspan_examples():
    assert distance_to_rowspan([1, 0], [[0, 1]]) == pytest.approx(1.0, abs=1e-12)
    assert distance_to_rowspan([1, 1, 0], [[1, 0, 0], [0, 1, 0]]) == pytest.approx(0.0, abs=1e-12)
    assert distance_to_rowspan([0, 0, 1], [[1, 0, 0], [0, 1, 0]]) == pytest.approx(1.0, abs=1e-12)


def test_distance_to_rowspan_rank_deficient_rows():
    d = distance_to_rowspan([0, 2, 0], [[1, 0, 0], [2, 0, 0]])
    assert d == pytest.approx(2.0, abs=1e-12)


def test_distance_shape_mismatch():
    with pytest.raises(ValueError):
        distance_to_rowspan([1, 0], [[1, 0, 0]])


def test_doubled_distance_when_sum_in_span():
    # dist(r1 - r2, V) = 2 dist(r1, V) whenever r1 + r2 lies in V
    m = draw(7, 3, seed=8)
    arr = m.dense()
    r1, r2 = arr[0], arr[1]
    span = np.vstack([(r1 + r2)[None, :], arr[2:]])
    lhs = distance_to_rowspan(r1 - r2, span)
    rhs = 2.0 * distance_to_rowspan(r1, span)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_row_distance_bound_constructed_witness():
    # witness orthogonal to everything except the first-ordered row makes
    # both sides directly computable
    for seed in range(5, 30):
        m = draw(6, 3, seed=seed)
        arr = m.dense()
        others = np.vstack([(arr[0] + arr[1])[None, :], arr[2:]])
        # least-squares residual of arr[0] against the span, normalized
        coef, *_ = np.linalg.lstsq(others.T, arr[0], rcond=None)
        resid = arr[0] - others.T @ coef
        if np.linalg.norm(resid) > 1e-9:
            break
    else:
        pytest.fail("no draw with the first row outside the span")
    witness = resid / np.linalg.norm(resid)
    out = row_distance_bound(m, list(range(6)), witness)
    assert out.applicable and out.holds


@pytest.mark.parametrize("seed", range(10))
def test_row_distance_bound_random(seed):
    m = draw(6, 3, seed=seed)
    rng = derive_rng(seed, 1)
    order = rng.permutation(6)
    w = rng.standard_normal(6)
    w /= np.linalg.norm(w)
    out = row_distance_bound(m, order, w)
    assert out.holds


def test_row_distance_bound_validates_inputs():
    m = draw(5, 2, seed=0)
    with pytest.raises(ValueError):
        row_distance_bound(m, [0, 1, 2, 3], np.ones(5) / np.sqrt(5))
    with pytest.raises(ValueError):
        row_distance_bound(m, [0, 1, 2, 3, 4], np.ones(5))


@given(seed=st.integers(0, 300))
@settings(max_examples=20, deadline=None)
def test_restricted_value_is_attained_on_sumzero(seed):
    """The restricted value is a true infimum over the sum-zero sphere:
    no random sum-zero direction beats it."""
    a = draw(8, 3, seed=seed).dense()
    value = restricted_smallest(a)
    rng = derive_rng(seed, 7)
    for _ in range(8):
        x = rng.standard_normal(8)
        x -= x.mean()
        x /= np.linalg.norm(x)
        assert np.linalg.norm(a @ x) >= value - 1e-9
