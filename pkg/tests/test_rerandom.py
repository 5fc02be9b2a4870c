import numpy as np
import pytest

from regdigraph.core import validate
from regdigraph.rerandom import (
    RerandomBudgetError,
    enumerate_extensions,
    extract_revealed,
    resample_conditional,
)
from regdigraph.sampler import SamplerConfig, sample_uniform
from regdigraph.structures import SplitMatchPair


def circulant(n, offsets):
    e = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for o in offsets:
            e[i, (i + o) % n] = 1
    return validate(e, len(offsets))


def test_extract_n2_index_ranges():
    m = validate(np.eye(2, dtype=np.int64), 1)
    rev = extract_revealed(m, SplitMatchPair(order=(0, 1), split=(0,)))
    assert rev.row_sums_split == (1, 0)
    assert rev.row_sums_cosplit == (0, 1)
    assert rev.odd_pair_sums == ((1,),)
    assert rev.even_pair_sums == ()
    assert rev.first_row_cosplit == (0,)
    assert rev.last_row_tail == (1,)


def test_extract_circulant4_by_hand():
    rev = extract_revealed(
        circulant(4, (0, 1)), SplitMatchPair(order=(0, 1, 2, 3), split=(0, 1))
    )
    assert rev.row_sums_split == (2, 1, 0, 1)
    assert rev.row_sums_cosplit == (0, 1, 2, 1)
    assert rev.odd_pair_sums == ((1, 2), (1, 0))
    assert rev.even_pair_sums == ((2, 1),)
    assert rev.first_row_cosplit == (0, 0)
    # n even: the tail is the last-ordered row on the complement
    assert rev.last_row_tail == (0, 1)


def test_pair_sum_entries_and_consistency():
    m = sample_uniform(SamplerConfig(n=10, d=4, seed=2))
    pair = SplitMatchPair(order=tuple(range(10)), split=(0, 3, 4, 7, 8))
    rev = extract_revealed(m, pair)
    for vec in rev.odd_pair_sums + rev.even_pair_sums:
        assert all(x in (0, 1, 2) for x in vec)
    split = list(pair.split)
    for i, vec in enumerate(rev.odd_pair_sums):
        a, b = pair.order[2 * i], pair.order[2 * i + 1]
        assert sum(vec) == rev.row_sums_split[a] + rev.row_sums_split[b]
        assert list(vec) == list(m.entries[a][split] + m.entries[b][split])


def test_resample_identical_rows_is_identity():
    j = validate(np.ones((3, 3), dtype=np.int64), 3)
    pair = SplitMatchPair(order=(0, 1, 2), split=(0,))
    out = resample_conditional(j, pair, np.random.default_rng(0))
    assert out == j


def test_resample_preserves_membership_and_information():
    rng = np.random.default_rng(17)
    for seed in range(5):
        m = sample_uniform(SamplerConfig(n=20, d=5, seed=seed))
        order = tuple(int(i) for i in rng.permutation(20))
        split = tuple(sorted(int(i) for i in rng.permutation(20)[:10]))
        pair = SplitMatchPair(order=order, split=split)
        rev = extract_revealed(m, pair)
        for _ in range(8):
            out = resample_conditional(m, pair, rng)
            validate(out.entries, 5)
            assert extract_revealed(out, pair) == rev


def test_enumerate_all_sets_empty_is_singleton():
    j = validate(np.ones((3, 3), dtype=np.int64), 3)
    pair = SplitMatchPair(order=(0, 1, 2), split=(0,))
    ext = enumerate_extensions(extract_revealed(j, pair))
    assert ext == [j]


def test_enumerate_single_free_pair():
    # identity rows 0,1 differ on both split columns with weight 0: two
    # assignments; every other restriction set is empty or forced
    m = validate(np.eye(4, dtype=np.int64), 1)
    pair = SplitMatchPair(order=(0, 1, 2, 3), split=(0, 1))
    ext = enumerate_extensions(extract_revealed(m, pair))
    assert len(ext) == 2
    assert m in ext


def frozen_fiber():
    m = circulant(4, (0, 1))
    pair = SplitMatchPair(order=(0, 1, 2, 3), split=(0, 2))
    return m, pair


def test_enumerate_circulant_fixture():
    m, pair = frozen_fiber()
    rev = extract_revealed(m, pair)
    ext = enumerate_extensions(rev)
    assert len(ext) == 8
    assert len({e.key() for e in ext}) == 8
    assert m in ext
    for e in ext:
        validate(e.entries, 2)
        assert extract_revealed(e, pair) == rev


def test_enumerate_budget_error():
    a = np.zeros(12, dtype=np.int64)
    a[:6] = 1
    entries = np.array([a if i % 2 == 0 else 1 - a for i in range(12)])
    m = validate(entries, 6)
    pair = SplitMatchPair(order=tuple(range(12)), split=tuple(range(6)))
    with pytest.raises(RerandomBudgetError):
        enumerate_extensions(extract_revealed(m, pair))


def test_resampler_uniform_over_fiber():
    m, pair = frozen_fiber()
    ext = enumerate_extensions(extract_revealed(m, pair))
    index = {e.key(): i for i, e in enumerate(ext)}
    rng = np.random.default_rng(123)
    draws = 8000
    counts = np.zeros(len(ext), dtype=np.int64)
    for _ in range(draws):
        out = resample_conditional(m, pair, rng)
        counts[index[out.key()]] += 1
    assert counts.sum() == draws  # support equals the enumerated fiber
    tv = 0.5 * np.abs(counts / draws - 1.0 / len(ext)).sum()
    assert tv < 0.03


def test_pair_draws_uncorrelated():
    m, pair = frozen_fiber()
    rng = np.random.default_rng(7)
    draws = 6000
    xs = np.empty(draws)
    ys = np.empty(draws)
    for k in range(draws):
        out = resample_conditional(m, pair, rng)
        # indicators from two different row pairs of the order
        xs[k] = out.entries[0, 0]
        ys[k] = out.entries[2, 0]
    corr = np.corrcoef(xs, ys)[0, 1]
    assert abs(corr) < 0.05
