import numpy as np
import pytest
from scipy.integrate import quad

from oscillab.errors import DomainError, UnsupportedConfiguration
from oscillab.partitions import (
    CHI,
    PHI,
    PSI,
    SECTION_CUTOFF,
    derivative_bound_check,
    make_bump,
    psi0_profile,
    smooth_step,
    whitney,
)


@pytest.fixture(scope="module")
def decomp():
    return whitney(20)


def test_bump_values():
    b = make_bump(0.25, 0.5, 0.0)
    assert b(0.0) == 1.0
    assert b(0.6) == 0.0
    assert 0 < b(0.3) < 1
    assert b(0.3) == b(-0.3)
    with pytest.raises(DomainError):
        make_bump(0.5, 0.5)


def test_sandwiches():
    x = np.linspace(-3, 3, 10_001)
    for bump, inner, outer in ((PHI, (-0.25, 0.25), (-0.5, 0.5)), (CHI, (-0.25, 0.25), (-0.5, 0.5)),
                               (SECTION_CUTOFF, (-0.75, 0.75), (-1, 1)), (PSI, (0.5, 1.0), (-0.25, 2.0))):
        v = bump(x)
        assert np.all((v >= 0) & (v <= 1))
        assert np.all(v[(x >= inner[0]) & (x <= inner[1])] == 1)
        assert np.all(v[(x <= outer[0]) | (x >= outer[1])] == 0)
    # PSI also vanishes near the origin, so psi0 is smooth there
    assert np.all(PSI(x[np.abs(x) <= 0.25]) == 0)


def test_smooth_step_limits():
    assert smooth_step(0.0) == 0 and smooth_step(1.0) == 1
    assert smooth_step(0.5) == pytest.approx(0.5)


def test_psi0_profile():
    assert psi0_profile(1)(0.6) == PSI(0.6)
    # d = 2, s = 0.09: sqrt(s) = 0.3 sits on the rising ramp of PSI
    assert psi0_profile(2)(0.09) == pytest.approx(PSI(0.3) / (2 * 0.3), rel=1e-15)
    # ramp argument (0.5 - 0.45) / 0.25 = 0.2, so PSI(0.3) = e^-5 / (e^-5 + e^-1.25)
    assert psi0_profile(2)(0.09) == pytest.approx(0.0382956165167093, rel=1e-12)
    assert psi0_profile(2)(-1.0) == 0
    with pytest.raises(DomainError):
        psi0_profile(0)


def test_substitution_identity():
    # int e(-u s) psi0(s) ds == int e(-u t^2) psi(t) dt at u = 1, two independent quadratures
    p0 = psi0_profile(2)
    lo, hi = PSI.support
    a = complex(quad(lambda s: np.cos(2 * np.pi * s) * p0(s), lo**2, hi**2, limit=200)[0],
                -quad(lambda s: np.sin(2 * np.pi * s) * p0(s), lo**2, hi**2, limit=200)[0])
    b = complex(quad(lambda t: np.cos(2 * np.pi * t * t) * PSI(t), lo, hi, limit=200)[0],
                -quad(lambda t: np.sin(2 * np.pi * t * t) * PSI(t), lo, hi, limit=200)[0])
    assert abs(a - b) < 1e-6


def test_whitney_structure(decomp):
    assert np.all(np.diff(decomp.lefts) > 0)
    assert np.allclose(decomp.rights[:-1], decomp.lefts[1:], rtol=0, atol=0)
    for i in range(len(decomp)):
        lo, hi = decomp.enlarged(i, 100)
        assert lo >= 0 and hi <= 1
        slo, shi = decomp.support(i)
        elo, ehi = decomp.enlarged(i, 4)
        assert elo <= slo and shi <= ehi
    assert decomp.overlap_constant(20) <= 40
    counts = decomp.per_size_counts()
    assert set(counts.values()) == {128}


def test_whitney_cover_and_sum(decomp):
    g = decomp.grid_depth
    x = (np.arange(1 << 16) + 0.5) / (1 << 16)
    inner = x[(x > 2.0**-g) & (x < 1 - 2.0**-g)]
    assert np.all(decomp.locate(inner) >= 0)
    assert abs(decomp.partition_sum(0.37)[0] - 1) < 1e-10
    assert np.max(np.abs(decomp.partition_sum(inner[(inner > 2 * 2.0**-g) & (inner < 1 - 2 * 2.0**-g)]) - 1)) < 1e-10
    assert decomp.boundary_residual() < 2.0 ** (-g + 8)


def test_whitney_domain():
    with pytest.raises(DomainError):
        whitney(7)


def test_derivative_bounds(decomp):
    assert derivative_bound_check(decomp, 0, [5, 700]) <= 1 + 1e-12
    # interior intervals of two different sizes see identically shaped ramps
    a = derivative_bound_check(decomp, 1, [32])
    b = derivative_bound_check(decomp, 1, [32 + 5 * 128])
    assert decomp.sizes[32] != decomp.sizes[32 + 5 * 128]
    assert abs(a - b) <= 0.1 * max(a, b)
    assert np.isfinite(derivative_bound_check(decomp, 2, [32, 1000]))
    with pytest.raises(UnsupportedConfiguration):
        derivative_bound_check(decomp, 4)
