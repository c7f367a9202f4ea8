import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscillab.errors import DomainError
from oscillab.martingale import (
    DyadicFunction,
    conditional_expectation,
    grid_norm,
    lepingle_jump_ratio,
    lepingle_jump_ratios,
    lepingle_variation_ratio,
    martingale_paths,
    random_dyadic_function,
)

RADEMACHER = [1.0, 1.0, -1.0, -1.0]


def test_block_means():
    f = DyadicFunction(RADEMACHER)
    assert np.array_equal(conditional_expectation(f, 0).samples, f.samples)
    assert np.array_equal(conditional_expectation(f, 1).samples, f.samples)
    assert np.array_equal(conditional_expectation(f, 2).samples, np.zeros(4))


def test_level_range():
    with pytest.raises(DomainError):
        conditional_expectation(DyadicFunction(RADEMACHER), 3)
    with pytest.raises(DomainError):
        DyadicFunction([1, 2, 3])


def test_hand_enumerated_ratios():
    # every point sees the path (±1, ±1, 0): one increment of size 1
    f = DyadicFunction(RADEMACHER)
    assert lepingle_jump_ratio(f, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert lepingle_jump_ratio(f, 1.0) == 0.0
    assert lepingle_variation_ratio(f, 3) == pytest.approx(1.0, abs=1e-15)


def test_constant_and_zero():
    f = DyadicFunction(np.full(16, 2.5))
    assert lepingle_jump_ratio(f, 0.1) == 0
    assert lepingle_variation_ratio(f, 2.5) == 0
    with pytest.raises(DomainError):
        lepingle_jump_ratio(DyadicFunction(np.zeros(8)), 1)
    with pytest.raises(DomainError):
        lepingle_variation_ratio(f, 2.0)


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_tower_contraction_mean(depth, seed):
    rng = np.random.default_rng(seed)
    f = random_dyadic_function(depth, rng)
    j, k = sorted(int(v) for v in rng.integers(0, depth + 1, size=2))
    ek = conditional_expectation(f, k).samples
    assert np.max(np.abs(conditional_expectation(conditional_expectation(f, j), k).samples - ek)) <= 1e-12
    assert np.max(np.abs(conditional_expectation(conditional_expectation(f, k), j).samples - ek)) <= 1e-12
    for p in (1, 2, np.inf):
        assert grid_norm(ek, p) <= grid_norm(f.samples, p) * (1 + 1e-12)
    assert abs(ek.mean() - f.samples.mean()) <= 1e-12


def test_paths_match_expectations(rng):
    f = random_dyadic_function(6, rng)
    paths = martingale_paths(f)
    for k in range(7):
        assert np.allclose(paths[:, k], conditional_expectation(f, k).samples, atol=1e-14)


def test_reversal_invariance(rng):
    f = random_dyadic_function(8, rng)
    paths = martingale_paths(f)
    from oscillab.oscillation import batch_jump_counts, batch_r_variation

    assert np.array_equal(batch_jump_counts(paths, [0.3]), batch_jump_counts(paths[:, ::-1].copy(), [0.3]))
    assert np.allclose(batch_r_variation(paths, 2.5), batch_r_variation(paths[:, ::-1].copy(), 2.5), rtol=1e-12)


def test_jump_ratios_nonincreasing_altitude_grid(rng):
    f = random_dyadic_function(8, rng)
    lams = 2.0 ** np.arange(-4, 2)
    counts_based = lepingle_jump_ratios(f, lams) / lams
    assert np.all(np.diff(counts_based) <= 1e-15)


def test_variation_ratio_grows_slower_than_bound(rng):
    f = random_dyadic_function(10, rng)
    low, high = lepingle_variation_ratio(f, 2.05), lepingle_variation_ratio(f, 4.0)
    bound_ratio = (2.05 / 0.05) / (4.0 / 2.0)
    assert high <= low <= bound_ratio * high
