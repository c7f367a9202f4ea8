"""Weyl sums, the polynomial multiplier m_N, the oscillatory factor phi_N and major arcs.

Conventions: ``e(t) = exp(2 pi i t)`` and ``Q = P - b_0``. The multiplier is::

    m_N(beta) = sum_n w_N(n) e((xi - beta) Q(n))

with ``w_N(n) = 1/N`` on ``1 <= n <= N`` (flat) or ``w_N(n) = psi(n/N)/N``.
Phases are reduced mod 1 before any floating-point trigonometry: exactly with
rationals for scalar ``beta``, and with a 64-bit fixed-point product for
dyadic grids of ``beta`` (see :func:`multiplier_m`).
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import mpmath
import numba
import numpy as np
import scipy.special

from .errors import DomainError, PrecisionError, QuadratureError, UnsupportedConfiguration
from .partitions import CHI, PSI
from .polynomial import RealPolynomial
from .report import ExperimentReport, least_squares_fit

__all__ = [
    "PHASE_BUDGET",
    "MajorArcFrequency",
    "weyl_sum",
    "weights",
    "half_bin_grid",
    "multiplier_m",
    "vdc_phi",
    "vdc_quadrature",
    "major_arcs",
    "approx_multiplier_L",
    "approx_multiplier",
    "arc_levels",
    "error_scan",
    "ERROR_COLUMNS",
]

PHASE_BUDGET = 2.0**-40
ERROR_COLUMNS = ["N", "delta0", "sup_error", "grid_size", "seed"]


def weyl_sum(q, a):
    """``(1/q) sum_{r=1}^q e(-(a_1 r + a_2 r^2 + ... + a_d r^d)/q)``."""
    q = int(q)
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    a = [int(v) % q for v in np.atleast_1d(a)]
    r = np.arange(1, q + 1, dtype=np.int64) % q
    # Horner mod q; q * q must fit in int64
    if q > 3_000_000_000:
        raise DomainError("q too large for int64 residues")
    h = np.zeros(q, dtype=np.int64)
    for coef in reversed(a):
        h = (h + coef) % q
        h = (h * r) % q
    return complex(np.mean(np.exp(-2j * np.pi * h / q)))


@dataclass(frozen=True)
class MajorArcFrequency:
    theta: float
    q: int
    a_d: int
    weyl_value: complex
    m: int = 0


# ---------------------------------------------------------------------------
# the multiplier m_N


def weights(N, weight="flat"):
    """``(n, w_N(n))`` over the support of the weight."""
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    if weight == "flat":
        n = np.arange(1, N + 1)
        return n, np.full(N, 1.0 / N)
    if weight == "psi":
        lo, hi = PSI.support
        n = np.arange(max(1, math.floor(lo * N)), math.ceil(hi * N) + 1)
        w = PSI(n / N) / N
        keep = w > 0
        return n[keep], w[keep]
    raise DomainError(f"unknown weight {weight!r}")


def half_bin_grid(size, lo=0.0, hi=1.0):
    """``size`` points ``lo + (j + 1/2) (hi - lo) / size``, avoiding bin edges."""
    return lo + (np.arange(size) + 0.5) * (hi - lo) / size


def _as_fraction(beta):
    if isinstance(beta, Fraction):
        return beta
    if isinstance(beta, str):
        from decimal import Decimal

        return Fraction(Decimal(beta))
    return Fraction(beta)


def _integer_values(Q, ns):
    nums, D = Q.integer_form()
    out = []
    for n in ns:
        acc = 0
        for c in reversed(nums):
            acc = acc * int(n) + c
        out.append(acc)
    return out, D


def _phase_uncertainty(Q, n_max, scale):
    return float(scale) * float(Q.uncertainty(n_max))


def _neumaier(values):
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _support_max(N, weight):
    # largest n in the weight's support, checked before anything is allocated
    return int(N) if weight != "psi" else math.ceil(PSI.support[1] * int(N))


def _scalar_m(N, xi, beta, Q, weight):
    delta = Fraction(int(xi)) - _as_fraction(beta)
    err = _phase_uncertainty(Q, _support_max(N, weight), abs(delta))
    if err > PHASE_BUDGET:
        raise PrecisionError(f"phase uncertainty {err:.3g} exceeds 2^-40")
    n, w = weights(N, weight)
    vals, D = _integer_values(Q, n)
    u, v = delta.numerator, delta.denominator * D
    phases = np.array([((u * x) % v) / v for x in vals])
    return _neumaier(w * np.exp(2j * np.pi * phases))


@numba.njit(cache=True)
def _grid_sums(qfix, w, cs):
    out = np.empty(cs.size, dtype=np.complex128)
    scale = 2.0**-64
    two_pi = 2.0 * np.pi
    for i in range(cs.size):
        c = cs[i]
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for k in range(qfix.size):
            t = float(c * qfix[k]) * scale
            if t >= 0.5:
                t -= 1.0
            x = w[k] * math.cos(two_pi * t)
            y = w[k] * math.sin(two_pi * t)
            # Neumaier compensated sums
            s2 = sr + x
            if abs(sr) >= abs(x):
                cr += (sr - s2) + x
            else:
                cr += (x - s2) + sr
            sr = s2
            s2 = si + y
            if abs(si) >= abs(y):
                ci += (si - s2) + y
            else:
                ci += (y - s2) + si
            si = s2
        out[i] = complex(sr + cr, si + ci)
    return out


def _dyadic_exponent(beta, max_exp=40):
    for g in range(0, max_exp + 1):
        scaled = beta * 2.0**g
        if np.all(scaled == np.round(scaled)):
            return g
    return None


def _grid_m(N, xi, beta, Q, weight, g):
    cs = int(xi) * (1 << g) - np.round(beta * 2.0**g).astype(np.int64)
    cmax = float(np.max(np.abs(cs)))
    # rounding of the fixed-point Q(n) plus truncation of the surrogate
    err = cmax * 2.0**-65 + _phase_uncertainty(Q, _support_max(N, weight), cmax * 2.0**-g)
    if err > PHASE_BUDGET:
        raise PrecisionError(f"phase uncertainty {err:.3g} exceeds 2^-40")
    n, w = weights(N, weight)
    vals, D = _integer_values(Q, n)
    mod = 1 << 64
    shift = 64 - g
    qfix = np.array([((x << shift) + D // 2) // D % mod for x in vals], dtype=np.uint64)
    return _grid_sums(qfix, w.astype(float), cs.astype(np.uint64))


def multiplier_m(N, xi, beta, Q, weight="flat"):
    """``m_N(beta)`` for the polynomial ``Q`` (its constant term is ignored).

    Scalar ``beta`` (float, decimal string or Fraction) takes the exact
    rational path: floats are used at their exact binary value. Arrays of
    dyadic rationals ``p / 2**g`` with ``g <= 40`` take a fixed-point path:
    ``Q(n)`` is rounded once to a multiple of ``2**(g-64)`` and multiplied by
    the integer ``xi 2**g - p`` with wrap-around mod ``2**64``, which is
    exact reduction mod 1 up to ``|xi 2**g - p| 2**-65``. Other arrays fall
    back to the scalar path point by point.

    Raises :class:`PrecisionError` when the phase uncertainty after
    reduction would exceed ``2**-40``.
    """
    if not isinstance(Q, RealPolynomial):
        raise DomainError("Q must be a RealPolynomial")
    if Q.coeffs[0] != 0:
        Q = Q.without_constant()
    if np.ndim(beta) == 0 and not isinstance(beta, np.ndarray):
        return _scalar_m(N, xi, beta, Q, weight)
    beta = np.asarray(beta, dtype=float)
    g = _dyadic_exponent(beta)
    if g is not None and beta.size:
        return _grid_m(N, xi, beta.ravel(), Q, weight, g).reshape(beta.shape)
    return np.array([_scalar_m(N, xi, float(b), Q, weight) for b in beta.ravel()]).reshape(beta.shape)


# ---------------------------------------------------------------------------
# the oscillatory factor phi_N


_GL16 = np.polynomial.legendre.leggauss(16)
_GL8 = np.polynomial.legendre.leggauss(8)


def _panel_rule(f, a, b, rule):
    x, w = rule
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = mid[:, None] + half[:, None] * x[None, :]
    return half * (f(t) @ w)


def vdc_quadrature(c, d, weight=None, interval=(0.0, 1.0), tol=1e-10, max_panels=1 << 22, min_panels=16):
    """``int_a^b e(-c t^d) weight(t) dt`` by phase-controlled Gauss-Legendre panels.

    Panel edges sit where the phase ``2 pi |c| t^d`` crosses multiples of
    ``pi/4``, so no panel sees more than an eighth of a turn. Each panel is
    integrated with 16 and 8 nodes; panels whose two values differ by more
    than their share of ``tol`` are bisected. Returns ``(value, diagnostics)``.
    """
    a, b = map(float, interval)
    if not b > a:
        raise DomainError("empty integration interval")
    ac = abs(float(c))
    edges = [np.linspace(a, b, min_panels + 1)]
    if ac > 0:
        k0 = math.floor(8 * ac * min(abs(a), abs(b)) ** d)
        k1 = math.ceil(8 * ac * max(abs(a), abs(b)) ** d)
        if k1 - k0 > max_panels:
            raise QuadratureError(
                "too many panels for the phase budget",
                {"c": c, "d": d, "panels": k1 - k0, "max_panels": max_panels},
            )
        t = (np.arange(k0, k1 + 1) / (8 * ac)) ** (1.0 / d)
        edges.append(t[(t > a) & (t < b)])
    edges = np.unique(np.concatenate(edges))

    def f(t):
        out = np.exp(-2j * np.pi * c * t**d)
        return out if weight is None else out * weight(t)

    lo, hi = edges[:-1], edges[1:]
    total = 0.0 + 0.0j
    err = 0.0
    rounds = 0
    while lo.size:
        rounds += 1
        if rounds > 40 or lo.size > max_panels:
            raise QuadratureError(
                "quadrature did not converge",
                {"c": c, "d": d, "rounds": rounds, "open_panels": int(lo.size), "error_so_far": err},
            )
        fine = _panel_rule(f, lo, hi, _GL16)
        coarse = _panel_rule(f, lo, hi, _GL8)
        diff = np.abs(fine - coarse)
        ok = diff <= tol * (hi - lo) / (b - a)
        total += math.fsum(fine[ok].real) + 1j * math.fsum(fine[ok].imag)
        err += float(diff[ok].sum())
        mid = 0.5 * (lo[~ok] + hi[~ok])
        lo, hi = np.concatenate([lo[~ok], mid]), np.concatenate([mid, hi[~ok]])
    return complex(total), {"rounds": rounds, "panels": int(edges.size - 1), "error_estimate": err}


def _phi_closed(c, d):
    """``int_0^1 e(-c t^d) dt = (1/d) (2 pi i c)^(-1/d) gamma(1/d, 2 pi i c)``."""
    c = np.asarray(c, dtype=float)
    out = np.ones(c.shape, dtype=complex)
    nz = c != 0
    if d == 1:
        z = 2j * np.pi * c[nz]
        out[nz] = (1 - np.exp(-z)) / z
    elif d == 2:
        x = 2 * np.sqrt(np.abs(c[nz]))
        S, C = scipy.special.fresnel(x)
        out[nz] = (C - 1j * np.sign(c[nz]) * S) / x
    else:
        s = mpmath.mpf(1) / d
        vals = []
        for cv in c[nz]:
            z = 2j * mpmath.pi * mpmath.mpf(float(cv))
            vals.append(complex(s * z ** (-s) * mpmath.gammainc(s, 0, z)))
        out[nz] = vals
    return out


def vdc_phi(N, beta, b_d, d, variant="rough", method="auto", tol=1e-10):
    """``phi_N(beta)``.

    ``rough``: ``int_0^1 e(-b_d N^d beta t^d) dt``.
    ``schwartz``: ``int e(-beta b_d N^d t^d) psi(t) dt`` with ``psi = PSI``.

    ``method="auto"`` uses the closed form for the rough variant (Fresnel
    integrals for ``d = 2``, the lower incomplete gamma function otherwise)
    and adaptive quadrature for the Schwartz variant; ``method="quad"``
    forces quadrature with absolute tolerance ``tol``.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"degree must be a positive integer, got {d!r}")
    d = int(d)
    b = float(b_d)
    if b == 0:
        raise DomainError("b_d must be nonzero")
    scalar = np.ndim(beta) == 0
    c = np.atleast_1d(np.asarray(beta, dtype=float)) * b * float(N) ** d
    if variant == "rough":
        if method == "auto":
            out = _phi_closed(c, d)
        elif method == "quad":
            out = np.array([vdc_quadrature(cv, d, tol=tol)[0] for cv in c])
        else:
            raise DomainError(f"unknown method {method!r}")
    elif variant == "schwartz":
        lo, hi = PSI.support
        out = np.array([vdc_quadrature(cv, d, PSI, (lo, hi), tol=tol)[0] for cv in c])
    else:
        raise DomainError(f"unknown variant {variant!r}")
    return complex(out[0]) if scalar else out.reshape(np.shape(beta))


# ---------------------------------------------------------------------------
# major arcs


def _check_monomial(Q):
    if not isinstance(Q, RealPolynomial):
        raise DomainError("Q must be a RealPolynomial")
    if not Q.is_monomial:
        raise UnsupportedConfiguration("major arcs are only enumerated for monomials b_d t^d")


def _denominators(s):
    if s < 0:
        raise DomainError(f"s must be >= 0, got {s}")
    return range(1, 2) if s == 0 else range(1 << s, 1 << (s + 1))


def major_arcs(s, xi, Q, window=(0.0, 1.0)):
    """Frequencies ``theta = xi - (a/q + m)/b_d`` in ``[lo, hi)`` with ``2^s <= q < 2^(s+1)``.

    ``gcd(a, q) = 1`` with ``0 <= a < q`` and ``m`` ranging over the integers.
    ``s = 0`` gives ``q = 1``, ``a = 0``. The attached value is the Weyl sum
    governing ``m_N`` near ``theta``: splitting ``n`` by residue mod ``q``
    gives ``m_N(beta) ~ S phi_N(beta - theta)`` with
    ``S = (1/q) sum_r e(a r^d / q) = weyl_sum(q, (0, ..., 0, -a))``.
    """
    _check_monomial(Q)
    d = Q.degree
    b = Q.leading
    lo, hi = (Fraction(v) if not isinstance(v, Fraction) else v for v in window)
    if not hi > lo:
        raise DomainError("empty window")
    xi = int(xi)
    # theta in [lo, hi) <=> (a/q + m) / b in (xi - hi, xi - lo]
    ends = sorted([b * (xi - hi), b * (xi - lo)])
    out = []
    for q in _denominators(s):
        for a in range(q):
            if math.gcd(a, q) != 1:
                continue
            coeffs = [0] * (d - 1) + [-a]
            S = None
            for m in range(math.floor(ends[0] - Fraction(a, q)), math.ceil(ends[1] - Fraction(a, q)) + 1):
                theta = xi - (Fraction(a, q) + m) / b
                if lo <= theta < hi:
                    if S is None:
                        S = weyl_sum(q, coeffs)
                    out.append(MajorArcFrequency(float(theta), q, a, S, m))
    out.sort(key=lambda arc: arc.theta)
    return out


def arc_levels(N, delta0):
    """Levels ``s >= 0`` with ``2^s <= N^delta0``."""
    top = math.floor(delta0 * math.log2(N) + 1e-12)
    return list(range(0, max(top, 0) + 1))


def approx_multiplier_L(N, s, beta, arcs, Q, chi=CHI, variant="rough"):
    """``L_{N,s}(beta) = sum_theta S(theta) phi_N(beta - theta) chi(10^s |b_d| (beta - theta))``."""
    _check_monomial(Q)
    b = float(Q.leading)
    d = Q.degree
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    out = np.zeros(beta.shape, dtype=complex)
    scale = 10.0**s * abs(b)
    reach = chi.outer / scale
    for arc in arcs:
        diff = beta - arc.theta
        near = np.abs(diff) < reach
        if not np.any(near):
            continue
        cut = chi(scale * diff[near])
        out[near] += arc.weyl_value * vdc_phi(N, diff[near], b, d, variant) * cut
    return out


def approx_multiplier(N, beta, Q, xi=0, delta0=1 / 3, window=None, variant="rough"):
    """``L_N = sum_{2^s <= N^delta0} L_{N,s}`` with arcs enumerated around the grid."""
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    total = np.zeros(beta.shape, dtype=complex)
    for s in arc_levels(N, delta0):
        pad = CHI.outer / (10.0**s * abs(float(Q.leading)))
        win = window or (Fraction(float(beta.min()) - pad), Fraction(float(beta.max()) + pad))
        arcs = major_arcs(s, xi, Q, win)
        total += approx_multiplier_L(N, s, beta, arcs, Q, variant=variant)
    return total


def error_scan(N_list, Q, xi=0, delta0=1 / 3, grid_size=1 << 12, seed=0):
    """``sup_beta |m_N - L_N|`` over a half-bin grid of ``[0, 1)`` for each ``N``.

    The grid is deterministic; ``seed`` is recorded for the report only.
    """
    N_list = [int(n) for n in N_list]
    if not N_list:
        raise DomainError("empty N list")
    if grid_size < 1:
        raise DomainError("grid must be nonempty")
    beta = half_bin_grid(grid_size)
    report = ExperimentReport("multiplier_error", list(ERROR_COLUMNS))
    for N in N_list:
        m = multiplier_m(N, xi, beta, Q)
        L = approx_multiplier(N, beta, Q, xi, delta0)
        report.add(N=N, delta0=delta0, sup_error=float(np.max(np.abs(m - L))), grid_size=grid_size, seed=seed)
    errs = np.array(report.column("sup_error"))
    if len(N_list) > 1:
        c0, slope, rms = least_squares_fit(np.log(N_list), np.log(errs))
        report.summary.update(loglog_slope=slope, loglog_intercept=c0, loglog_rms=rms)
    return report
