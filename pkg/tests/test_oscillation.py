import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscillab.errors import DomainError
from oscillab.oracles import enumerate_jump_count, enumerate_variation
from oscillab.oscillation import (
    ComplexSequence,
    ScalePartition,
    batch_diameter,
    batch_jump_counts,
    batch_r_variation,
    block_v2_bound,
    jump_count,
    r_variation,
    random_dyadic_partition,
    split_jump_bound,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
sequences = st.lists(complexes, min_size=1, max_size=9)
lams = st.sampled_from([0.1, 0.5, 1.0, 2.0, 3.7])
rs = st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf])


def test_constant_sequence():
    assert jump_count([3, 3, 3], 0.1) == 0
    assert r_variation([3, 3, 3], 2) == 0


def test_alternating_jumps():
    assert jump_count([0, 2, 0, 2], 1) == 3


def test_greedy_fails_dp_does_not():
    # a greedy scan from the first term would step 5 -> 0 (not > 5) and 0 -> 10
    assert jump_count([5, 0, 10], 5) == 1


def test_ties_do_not_count():
    assert jump_count([0, 1], 1) == 0
    assert jump_count([0, 1], 0.999) == 1


def test_small_variations():
    assert r_variation([0, 1], 3) == 1
    assert r_variation([0, 1, 0], 2) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert r_variation([0, 1, 0], 1) == 2
    assert r_variation([0, 1, 0], math.inf) == 1


def test_domain_errors():
    with pytest.raises(DomainError):
        jump_count([], 1)
    with pytest.raises(DomainError):
        jump_count([1, 2], 0)
    with pytest.raises(DomainError):
        r_variation([1, 2], 0.5)
    with pytest.raises(DomainError):
        block_v2_bound([1, 2, 3, 4, 5, 6])
    with pytest.raises(DomainError):
        ComplexSequence([1, 2], labels=[2, 1])
    with pytest.raises(DomainError):
        ScalePartition(((0, 1), (3, 4)))


def test_block_bound_examples():
    assert block_v2_bound([2.0] * 5) == 0
    # direct evaluation: level 0 gives 2, coarser levels vanish
    assert block_v2_bound([0, 1, 0, 1, 0]) == 4.0
    assert r_variation([0, 1, 0, 1, 0], 2) == 2.0
    # length 2^n is edge-extended by repeating the last term
    assert block_v2_bound([0, 1, 0, 1]) == block_v2_bound([0, 1, 0, 1, 1])


def test_split_bound_examples():
    lhs, rhs = split_jump_bound([0, 2, 0, 2], ScalePartition(((0, 1), (2, 3))), 1)
    assert lhs == pytest.approx(math.sqrt(3))
    assert lhs <= 10 * rhs
    lhs, rhs = split_jump_bound([0, 2, 0, 2, 5], ScalePartition(((0, 4),)), 0.7)
    assert rhs >= lhs


def test_split_bound_scan(rng):
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 33))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lhs, rhs = split_jump_bound(a, random_dyadic_partition(n, rng), float(rng.choice([0.25, 0.5, 1, 2])))
        if rhs > 0:
            worst = max(worst, lhs / rhs)
    assert np.isfinite(worst) and worst <= 10


@given(sequences, lams)
def test_jump_matches_oracle(a, lam):
    assert jump_count(a, lam) == enumerate_jump_count(np.array(a), lam)


@given(sequences, rs)
def test_variation_matches_oracle(a, r):
    dp, ex = r_variation(a, r), enumerate_variation(np.array(a), r)
    assert dp == pytest.approx(ex, rel=1e-12, abs=1e-300)


@given(sequences, lams, st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_jump_below_variation(a, lam, r):
    assert lam * jump_count(a, lam) ** (1 / r) <= r_variation(a, r) * (1 + 1e-12)


@given(sequences)
def test_variation_monotone_in_r(a):
    vals = [r_variation(a, r) for r in (1, 1.5, 2, 3, 7, math.inf)]
    assert all(b <= a_ * (1 + 1e-12) for a_, b in zip(vals, vals[1:]))


@given(sequences)
def test_trivial_v2_bound(a):
    assert r_variation(a, 2) <= 2 * np.sqrt(np.sum(np.abs(a) ** 2)) * (1 + 1e-12)


@given(sequences, st.floats(0.01, 5))
def test_jump_nonincreasing_in_lambda(a, lam):
    assert jump_count(a, lam) >= jump_count(a, lam * 1.5)


@given(sequences, lams, st.floats(0.1, 10), complexes)
def test_scaling_and_translation(a, lam, c, shift):
    a = np.array(a)
    assert jump_count(c * a, lam) == jump_count(a, lam / c)
    assert jump_count(a + shift, lam) == jump_count(a, lam)
    assert r_variation(c * a, 2) == pytest.approx(c * r_variation(a, 2), rel=1e-9, abs=1e-12)


@given(sequences, rs)
def test_reversal_invariance(a, r):
    assert r_variation(a[::-1], r) == pytest.approx(r_variation(a, r), rel=1e-12, abs=1e-300)
    assert jump_count(a[::-1], 1.0) == jump_count(a, 1.0)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_block_bound_dominates(n, seed):
    g = np.random.default_rng(seed)
    a = g.standard_normal(1 << n) + 1j * g.standard_normal(1 << n)
    assert r_variation(a, 2) <= block_v2_bound(a) * (1 + 1e-12)


def test_batch_kernels_match_scalar(rng):
    x = rng.standard_normal((40, 9)) + 1j * rng.standard_normal((40, 9))
    counts = batch_jump_counts(x, [0.5, 1.0])
    for i, row in enumerate(x):
        assert counts[i, 0] == jump_count(row, 0.5)
        assert counts[i, 1] == jump_count(row, 1.0)
    for r in (1.0, 2.5):
        v = batch_r_variation(x, r)
        assert np.allclose(v, [r_variation(row, r) for row in x], rtol=1e-12)
    assert np.allclose(batch_diameter(x), [r_variation(row, math.inf) for row in x], rtol=1e-14)
