import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscillab.errors import DomainError
from oscillab.ergodic import (
    CircleRotation,
    FiniteSupport,
    Indicator,
    IntegerShift,
    TrigPolynomial,
    average_series,
    ergodic_average,
    lacunary_times,
    shift_average,
    tail_diameters,
    weyl_limit_check,
    whitney_average,
    whitney_components,
    whitney_rotation_component,
)
from oscillab.partitions import whitney
from oscillab.polynomial import GOLDEN, SQRT2, RealPolynomial

LINEAR = RealPolynomial([0, 1])
QUAD = RealPolynomial.monomial(SQRT2, 2)
ROT = CircleRotation(GOLDEN)


def test_constants_are_exact():
    c = TrigPolynomial({0: 0.3 + 0.1j})
    for N in (1, 7, 1000):
        assert ergodic_average(ROT, c, 0.2, N, QUAD) == 0.3 + 0.1j
    s = average_series(ROT, Indicator(0, 1), np.linspace(0, 1, 5, endpoint=False), QUAD, 2, 4096)
    assert np.all(s.values == 1)


def test_linear_rotation_geometric_sum():
    # A_N e(x) = e(x) (1/N) sum_n e(n alpha)
    alpha = float(ROT.alpha)
    x = 0.17
    for N in (1, 10, 333):
        z = cmath.exp(2j * cmath.pi * alpha)
        expected = cmath.exp(2j * cmath.pi * x) * z * (1 - z**N) / (1 - z) / N
        assert abs(ergodic_average(ROT, TrigPolynomial({1: 1.0}), x, N, LINEAR) - expected) < 1e-10


def test_lacunary_times():
    assert lacunary_times(1, 100) == [2, 4, 8, 16, 32, 64]
    t1, t2 = lacunary_times(1, 1 << 12), lacunary_times(2, 1 << 12)
    assert set(t1) <= set(t2)
    assert lacunary_times(3, 10) == [1, 2, 3, 4, 5, 6, 8, 10]
    for R in (1, 2, 3, 5):
        t = lacunary_times(R, 10**6)
        assert t == sorted(set(t))
        k = np.arange(1, 200)
        ref = sorted({int(np.floor(2.0 ** (j / R) + 1e-12)) for j in k if 2.0 ** (j / R) <= 10**6})
        assert t == ref
    with pytest.raises(DomainError):
        lacunary_times(0, 10)


def test_series_restricts_to_subsequence():
    x = np.linspace(0, 1, 16, endpoint=False)
    f = TrigPolynomial({1: 1.0, -3: 0.5j})
    s1 = average_series(ROT, f, x, QUAD, 1, 2048)
    s2 = average_series(ROT, f, x, QUAD, 2, 2048)
    cols = [s2.times.index(t) for t in s1.times]
    assert np.allclose(s1.values, s2.values[:, cols], atol=1e-12)
    for j, N in enumerate(s1.times):
        assert np.allclose(s1.values[:, j], ergodic_average(ROT, f, x, N, QUAD), atol=1e-12)


@given(st.dictionaries(st.integers(-50, 50), st.floats(-5, 5), min_size=1, max_size=8), st.integers(-1000, 1000))
def test_shift_preserves_norms(values, m):
    f = FiniteSupport(values)
    for p in (1, 2, np.inf):
        assert f.shift(m).norm(p) == pytest.approx(f.norm(p))
    assert f.shift(m)(np.array([k - m for k in values])).tolist() == f(np.array(list(values))).tolist()


def test_shift_average_is_contraction():
    f = FiniteSupport({0: 1.0, 3: -2.0, 10: 0.5j})
    A = shift_average(f, 500, QUAD)
    assert A.norm(1) <= f.norm(1) + 1e-12
    assert A.norm(2) <= f.norm(2) + 1e-12
    assert IntegerShift.name == "shift"


def test_whitney_single_time():
    # N = 1: A_{1,J} delta_0 is phi_J({P(1)}) at -floor P(1)
    d = whitney(8)
    comps, tr = whitney_components({0: 1.0}, 1, QUAD, d)
    frac = float(QUAD.exact(1)) % 1
    assert set(comps) == {j for j in range(len(d)) if d.phi(j, frac) != 0}
    for j, comp in comps.items():
        assert comp.keys.tolist() == [-1]
        assert comp.values[0] == pytest.approx(d.phi(j, frac))


def test_whitney_reconstruction():
    f = {0: 1.0, 5: -0.5, 9: 2.0j}
    d = whitney(20)
    comps, tr = whitney_components(f, 2048, QUAD, d)
    total = sum(comps.values(), FiniteSupport({}))
    assert total.max_difference(shift_average(f, 2048, QUAD)) < 1e-8 + tr["deficient_weight"] * 3
    assert tr["deficient_times"] == 0
    assert whitney_average(f, min(comps), 2048, QUAD, d).max_difference(comps[min(comps)]) == 0


def test_whitney_mass_matches_interval_length():
    # equidistribution of {sqrt2 n^2}: component mass of delta_0 close to |J|
    d = whitney(10)
    comps, tr = whitney_components({0: 1.0}, 1 << 14, QUAD, d)
    lengths = np.diff(d.breaks)
    mass = np.array([comps[j].values.sum().real if j in comps else 0.0 for j in range(len(d))])
    assert np.all(mass >= 0)
    assert np.max(np.abs(mass - lengths)) < 5e-3
    assert abs(mass.sum() - 1) <= tr["deficient_weight"] + 1e-12


def test_whitney_rotation_sums_to_average():
    d = whitney(12)
    x = np.linspace(0, 1, 8, endpoint=False)
    f = TrigPolynomial({2: 1.0})
    parts = sum(whitney_rotation_component(f, ROT, QUAD, 300, j, x, d) for j in range(len(d)))
    full = ergodic_average(ROT, f, x, 300, QUAD)
    _, tr = whitney_components({0: 1.0}, 300, QUAD, d)
    assert np.max(np.abs(parts - full)) <= tr["deficient_weight"] + 1e-10


def test_weyl_limit():
    x = np.linspace(0, 1, 32, endpoint=False)
    assert weyl_limit_check(Indicator(0, 1), ROT, QUAD, 100, x) == 0
    # linear orbit: |A_N e - 0| <= 2 / (N |1 - e(alpha)|)
    bound = 2 / abs(1 - cmath.exp(2j * cmath.pi * float(ROT.alpha)))
    for N in (64, 1024):
        assert weyl_limit_check(TrigPolynomial({1: 1.0}), ROT, LINEAR, N, x) <= bound / N
    with pytest.raises(DomainError):
        weyl_limit_check(Indicator(0, 1), IntegerShift(), QUAD, 10, [0])


def test_tail_diameters_shrink():
    x = np.linspace(0, 1, 64, endpoint=False)
    s = average_series(ROT, TrigPolynomial({1: 1.0}), x, QUAD, 1, 1 << 14, weight="psi")
    rep = tail_diameters(s, [64, 1024])
    d = rep.column("tail_diameter")
    assert d[1] < d[0]
    with pytest.raises(DomainError):
        tail_diameters(s, [1 << 20])
