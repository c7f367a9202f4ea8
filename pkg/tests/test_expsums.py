import math
from fractions import Fraction

import numpy as np
import pytest

from oscillab.errors import DomainError, PrecisionError, UnsupportedConfiguration
from oscillab.expsums import (
    approx_multiplier_L,
    error_scan,
    half_bin_grid,
    major_arcs,
    multiplier_m,
    vdc_phi,
    vdc_quadrature,
    weights,
    weyl_sum,
)
from oscillab.oracles import multiplier_mp
from oscillab.partitions import PSI
from oscillab.polynomial import SQRT2, RealPolynomial

Q2 = RealPolynomial.monomial(SQRT2, 2)
B = float(SQRT2)


def test_weyl_examples():
    assert weyl_sum(1, [0, 0]) == 1
    assert abs(weyl_sum(2, [0, 1])) < 1e-15
    assert abs(abs(weyl_sum(5, [0, 1])) - 5**-0.5) < 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_weyl_bounds(d):
    for q in range(1, 120):
        for a in range(q):
            if math.gcd(a, q) != 1:
                continue
            s = abs(weyl_sum(q, [0] * (d - 1) + [a]))
            assert s <= 1 + 1e-12
            assert s <= 3 * q ** (-1 / d + 0.1)


def test_multiplier_trivial_cases():
    assert multiplier_m(64, 3, 3, Q2) == pytest.approx(1, abs=1e-15)
    assert multiplier_m(1, 0, 0.3, Q2) == pytest.approx(np.exp(2j * np.pi * (-0.3) * B), abs=1e-14)
    grid = half_bin_grid(64)
    assert np.all(np.abs(multiplier_m(256, 0, grid, Q2)) <= 1 + 1e-12)
    total = math.fsum(weights(256, "psi")[1])
    assert np.all(np.abs(multiplier_m(256, 0, grid, Q2, "psi")) <= total + 1e-12)


def test_multiplier_dual_precision_oracle():
    # independent summation at 120 digits
    oracle = multiplier_mp(1024, 0, "0.3", ["0", SQRT2])
    assert abs(multiplier_m(1024, 0, "0.3", Q2) - oracle) < 1e-12
    assert oracle == pytest.approx(-0.01988385488214246 - 0.01579363604273123j, abs=1e-14)


def test_grid_path_matches_scalar_path():
    grid = half_bin_grid(16)
    fast = multiplier_m(2048, 1, grid, Q2)
    slow = np.array([multiplier_m(2048, 1, Fraction(float(b)), Q2) for b in grid])
    assert np.max(np.abs(fast - slow)) < 1e-12


def test_precision_exhaustion():
    # 64 digits at degree 6: truncation error ~ n^6 10^-63 passes 2^-40 near n = 10^8.5
    Q6 = RealPolynomial.monomial(SQRT2, 6)
    with pytest.raises(PrecisionError):
        multiplier_m(10**9, 0, 0.5, Q6)
    with pytest.raises(PrecisionError):
        multiplier_m(10**9, 0, half_bin_grid(8), Q6)


def test_vdc_values():
    assert vdc_phi(64, 0.0, B, 2) == 1
    assert vdc_phi(1, 0.0, 1.0, 2, "schwartz") == pytest.approx(0.75, abs=1e-10)
    for d in (2, 3):
        for c in (0.37, -5.2, 80.1):
            q, diag = vdc_quadrature(c, d)
            assert abs(q - vdc_phi(1, c, 1.0, d)) < 1e-10
            assert diag["error_estimate"] < 1e-10


def test_vdc_bound_shape():
    beta = half_bin_grid(512, -0.5, 0.5)
    phi = np.abs(vdc_phi(64, beta, B, 2))
    assert np.all(phi <= 3 * (1 + 64**2 * B * np.abs(beta)) ** -0.5)
    s = np.abs(vdc_phi(8, half_bin_grid(16, -0.2, 0.2), B, 2, "schwartz"))
    assert np.all(s <= 1)


def test_major_arcs_hand_enumeration():
    # s = 1: q in {2, 3}; theta = -(a/q + m)/sqrt2 in [0, 1) needs a/q + m in (-sqrt2, 0]
    expected = sorted([
        (-(Fraction(2, 3) - 1) / Fraction(SQRT2), 3, 2),
        (-(Fraction(1, 2) - 1) / Fraction(SQRT2), 2, 1),
        (-(Fraction(1, 3) - 1) / Fraction(SQRT2), 3, 1),
        (-(Fraction(2, 3) - 2) / Fraction(SQRT2), 3, 2),
    ])
    arcs = major_arcs(1, 0, Q2, (0, 1))
    assert [(a.q, a.a_d) for a in arcs] == [(q, a) for _, q, a in expected]
    assert np.allclose([a.theta for a in arcs], [float(t) for t, _, _ in expected], rtol=0, atol=1e-15)
    for arc in arcs:
        assert 0 <= arc.theta < 1 and math.gcd(arc.a_d, arc.q) == 1
        assert arc.weyl_value == pytest.approx(np.conj(weyl_sum(arc.q, [0, arc.a_d])))


def test_major_arc_counts():
    for s in range(0, 5):
        assert len(major_arcs(s, 0, Q2, (0, 1))) <= 2 ** (2 * s) * (B + 2)


def test_major_arcs_non_monomial():
    with pytest.raises(UnsupportedConfiguration):
        major_arcs(1, 0, RealPolynomial([0, 1, SQRT2], irrational=(2,)), (0, 1))


def test_L_support_and_empty():
    arcs = major_arcs(2, 0, Q2, (0, 1))
    assert np.all(approx_multiplier_L(256, 2, np.array([0.5]), [], Q2) == 0)
    far = np.array([a.theta for a in arcs]).min() - 0.3
    assert approx_multiplier_L(256, 2, np.array([far]), arcs, Q2)[0] == 0


def test_weyl_value_sign_matters():
    # near theta the multiplier is S(theta) phi_N(beta - theta) with the conjugate sum attached
    arc = [a for a in major_arcs(1, 0, Q2, (0, 1)) if a.q == 3][0]
    beta = np.array([arc.theta + 1e-7])
    m = multiplier_m(4096, 0, float(beta[0]), Q2)
    L = approx_multiplier_L(4096, 1, beta, [arc], Q2)[0]
    assert abs(m - L) < 0.05
    flipped = np.conj(arc.weyl_value) * vdc_phi(4096, beta - arc.theta, B, 2)[0]
    assert abs(m - flipped) > 0.3


def test_error_scan_trend():
    rep = error_scan([256, 1024, 4096], Q2, grid_size=1 << 10)
    errs = rep.column("sup_error")
    assert rep.columns == ["N", "delta0", "sup_error", "grid_size", "seed"]
    # nonincreasing up to factor-2 noise
    assert all(b <= 2 * a for a, b in zip(errs, errs[1:]))
    with pytest.raises(DomainError):
        error_scan([], Q2)
