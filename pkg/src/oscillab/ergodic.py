"""Polynomial ergodic averages on a circle rotation and on the integer shift.

The shift acts by ``T^k f(x) = f(x + k)`` in both models, so on the circle
``T^m x = x + m alpha mod 1``. Averages are::

    A_N f(x) = sum_n w_N(n) f(T^{floor P(n)} x)

with the flat or psi weights of :func:`oscillab.expsums.weights`. Orbit
exponents ``floor P(n)`` and the products ``m alpha mod 1`` are computed in
exact integer arithmetic on the decimal surrogates, and converted to floats
only after reduction mod 1.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import math

import numpy as np

from .errors import DomainError
from .expsums import weights
from .oscillation import batch_diameter, batch_jump_counts, batch_r_variation
from .partitions import WhitneyDecomposition, whitney
from .polynomial import floor_values
from .report import ExperimentReport

__all__ = [
    "CircleRotation",
    "IntegerShift",
    "TrigPolynomial",
    "Indicator",
    "FiniteSupport",
    "AverageSeries",
    "lacunary_times",
    "orbit_exponents",
    "ergodic_average",
    "average_series",
    "oscillation_report",
    "tail_diameters",
    "series_report",
    "whitney_average",
    "whitney_components",
    "whitney_rotation_component",
    "weyl_limit_check",
    "SERIES_COLUMNS",
    "TAIL_COLUMNS",
]

SERIES_COLUMNS = ["P", "system", "R", "N", "x_index", "value_re", "value_im"]
TAIL_COLUMNS = ["N_0", "tail_diameter", "grid_p_norm"]


# ---------------------------------------------------------------------------
# systems and observables


class CircleRotation:
    """``x -> x + alpha mod 1`` on [0, 1) with Lebesgue measure."""

    name = "rotation"

    def __init__(self, alpha):
        self.alpha_text = str(alpha)
        a = Fraction(Decimal(alpha)) if isinstance(alpha, str) else Fraction(alpha)
        a -= math.floor(a)
        self.alpha = a

    def offsets(self, exponents):
        """``m alpha mod 1`` for each integer ``m``, reduced exactly before rounding."""
        p, q = self.alpha.numerator, self.alpha.denominator
        return np.array([(int(m) * p % q) / q for m in exponents])

    def apply(self, x, m):
        return np.mod(np.asarray(x, dtype=float) + self.offsets(np.atleast_1d(m))[0], 1.0)


class IntegerShift:
    """Translation on the integers with counting measure."""

    name = "shift"


@dataclass(frozen=True)
class TrigPolynomial:
    """``f(x) = sum_k c_k e(k x)`` on the circle."""

    coefficients: dict

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for k, c in self.coefficients.items():
            out += c * np.exp(2j * np.pi * int(k) * x)
        return out

    @property
    def integral(self):
        return complex(self.coefficients.get(0, 0))

    @property
    def constant(self):
        """The constant value if ``f`` is constant, else ``None``."""
        if all(int(k) == 0 or c == 0 for k, c in self.coefficients.items()):
            return self.integral
        return None

    @property
    def sup_norm_bound(self):
        return float(sum(abs(c) for c in self.coefficients.values()))


@dataclass(frozen=True)
class Indicator:
    """Indicator of ``[lo, hi)`` read mod 1."""

    lo: float
    hi: float

    def __post_init__(self):
        if not 0 <= self.lo < self.hi <= 1:
            raise DomainError(f"need 0 <= lo < hi <= 1, got [{self.lo}, {self.hi})")

    def __call__(self, x):
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        return ((x >= self.lo) & (x < self.hi)).astype(complex)

    @property
    def integral(self):
        return complex(self.hi - self.lo)

    @property
    def constant(self):
        return 1.0 + 0j if (self.lo, self.hi) == (0, 1) else None

    @property
    def sup_norm_bound(self):
        return 1.0


class FiniteSupport:
    """Finitely supported function on the integers."""

    def __init__(self, values):
        if isinstance(values, FiniteSupport):
            keys, vals = values.keys, values.values
        else:
            items = sorted((int(k), complex(v)) for k, v in dict(values).items())
            keys = np.array([k for k, _ in items], dtype=np.int64)
            vals = np.array([v for _, v in items], dtype=complex)
        self.keys = keys
        self.values = vals

    @classmethod
    def from_arrays(cls, keys, values):
        keys = np.asarray(keys, dtype=np.int64)
        values = np.asarray(values, dtype=complex)
        uniq, inv = np.unique(keys, return_inverse=True)
        acc = np.zeros(uniq.size, dtype=complex)
        np.add.at(acc, inv, values)
        out = cls({})
        out.keys, out.values = uniq, acc
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64)
        i = np.clip(np.searchsorted(self.keys, x), 0, max(self.keys.size - 1, 0))
        if self.keys.size == 0:
            return np.zeros(x.shape, dtype=complex)
        hit = self.keys[i] == x
        return np.where(hit, self.values[i], 0)

    def shift(self, m):
        """``T^m f``, i.e. ``x -> f(x + m)``."""
        out = FiniteSupport({})
        out.keys, out.values = self.keys - int(m), self.values.copy()
        return out

    def norm(self, p=2):
        a = np.abs(self.values)
        if np.isinf(p):
            return float(a.max()) if a.size else 0.0
        return float(np.sum(a**p) ** (1.0 / p))

    def __add__(self, other):
        return FiniteSupport.from_arrays(
            np.concatenate([self.keys, other.keys]), np.concatenate([self.values, other.values])
        )

    def max_difference(self, other):
        keys = np.union1d(self.keys, other.keys)
        return float(np.max(np.abs(self(keys) - other(keys)))) if keys.size else 0.0


# ---------------------------------------------------------------------------
# averages


def lacunary_times(R, N_max):
    """``I_R ∩ [1, N_max]`` with ``I_R = {floor(2^(k/R)) : k >= 1}``, deduplicated."""
    if int(R) != R or R < 1:
        raise DomainError(f"R must be a positive integer, got {R!r}")
    R = int(R)
    out = []
    k = 1
    while True:
        # exact integer R-th root of 2^k
        target = 1 << k
        t = int(round(2.0 ** (k / R)))
        while t**R > target:
            t -= 1
        while (t + 1) ** R <= target:
            t += 1
        if t > N_max:
            break
        if not out or t != out[-1]:
            out.append(t)
        k += 1
    return out


def orbit_exponents(P, n_max):
    """``(floor P(n), {P(n)})`` for ``n = 1..n_max``."""
    floors, fracs = floor_values(P, range(1, int(n_max) + 1))
    return floors, np.array(fracs)


def _orbit_values(system, f, x, floors):
    """Matrix ``f(T^{m_n} x_j)`` of shape ``(len(x), len(floors))``."""
    if isinstance(system, CircleRotation):
        off = system.offsets(floors)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return f(np.mod(x[:, None] + off[None, :], 1.0))
    if isinstance(system, IntegerShift):
        x = np.atleast_1d(np.asarray(x, dtype=np.int64))
        m = np.array(floors, dtype=np.int64)
        return f(x[:, None] + m[None, :])
    raise DomainError(f"unknown system {system!r}")


def _weight_total(N, weight):
    # flat weights sum to 1 by definition; psi weights are summed exactly rounded
    return 1.0 if weight == "flat" else math.fsum(weights(N, weight)[1])


def _constant(f):
    return getattr(f, "constant", None)


def ergodic_average(system, f, x, N, P, weight="flat"):
    """``A_N f(x)`` by direct summation; vectorised over an array of points.

    Constant observables are averaged exactly: the result is ``c`` times the
    total weight, which is exactly ``c`` for flat weights.
    """
    n, w = weights(N, weight)
    c = _constant(f)
    if c is not None:
        out = np.full(np.shape(np.atleast_1d(x)), c * _weight_total(N, weight), dtype=complex)
        return complex(out[0]) if np.ndim(x) == 0 else out
    floors, _ = orbit_exponents(P, n[-1])
    vals = _orbit_values(system, f, x, [floors[i - 1] for i in n])
    out = vals @ w
    return complex(out[0]) if np.ndim(x) == 0 else out


@dataclass
class AverageSeries:
    times: list
    values: np.ndarray  # shape (points, len(times))
    points: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise DomainError("times must be strictly increasing")
        self.values = np.atleast_2d(self.values)


def average_series(system, f, x, P, R, N_max, weight="flat"):
    """``A_N f(x)`` for ``N`` in ``I_R ∩ [1, N_max]`` at every point of ``x``."""
    times = lacunary_times(R, N_max)
    if not times:
        raise DomainError("no times below N_max")
    meta = {"P": P.descriptor, "system": system.name, "R": R, "weight": weight}
    c = _constant(f)
    if c is not None:
        row = np.array([c * _weight_total(N, weight) for N in times])
        return AverageSeries(times, np.tile(row, (np.size(x), 1)), np.atleast_1d(x), meta)
    last = times[-1] if weight == "flat" else weights(times[-1], weight)[0][-1]
    floors, _ = orbit_exponents(P, last)
    orbit = _orbit_values(system, f, x, floors)
    if weight == "flat":
        csum = np.cumsum(orbit, axis=1)
        vals = np.stack([csum[:, N - 1] / N for N in times], axis=1)
    else:
        cols = []
        for N in times:
            n, w = weights(N, weight)
            cols.append(orbit[:, n - 1] @ w)
        vals = np.stack(cols, axis=1)
    return AverageSeries(times, vals, np.atleast_1d(x), meta)


def oscillation_report(series, stat, param=None, p=2):
    """Per-point oscillation of ``N -> A_N f(x)`` and its grid L^p norm.

    ``stat`` is ``"variation"`` (``param = r``), ``"jump"`` (``param = lam``,
    value ``lam N_lam^(1/2)``) or ``"diameter"``.
    """
    paths = np.ascontiguousarray(series.values)
    if stat == "variation":
        v = batch_r_variation(paths, param)
    elif stat == "jump":
        v = param * np.sqrt(batch_jump_counts(paths, [param])[:, 0])
    elif stat == "diameter":
        v = batch_diameter(paths)
    else:
        raise DomainError(f"unknown statistic {stat!r}")
    report = ExperimentReport(f"oscillation_{stat}", ["x_index", "value"])
    for i, val in enumerate(v):
        report.add(x_index=i, value=float(val))
    report.summary.update(statistic=stat, param=param, p=p, grid_p_norm=float(np.mean(v**p) ** (1 / p)), max=float(v.max()))
    return report


def tail_diameters(series, N0_list, p=2):
    """Rows ``(N_0, mean tail diameter, grid L^p norm of the tail diameter)``."""
    times = np.array(series.times)
    report = ExperimentReport("tail_diameter", list(TAIL_COLUMNS))
    for N0 in N0_list:
        cols = times >= N0
        if cols.sum() == 0:
            raise DomainError(f"no times at or above N_0 = {N0}")
        tail = np.ascontiguousarray(series.values[:, cols])
        d = batch_diameter(tail)
        report.add(N_0=int(N0), tail_diameter=float(d.mean()), grid_p_norm=float(np.mean(d**p) ** (1 / p)))
    return report


def series_report(series):
    report = ExperimentReport("ergodic_series", list(SERIES_COLUMNS))
    for j, N in enumerate(series.times):
        for i in range(series.values.shape[0]):
            v = series.values[i, j]
            report.add(
                P=series.meta.get("P", ""), system=series.meta.get("system", ""), R=series.meta.get("R", ""),
                N=N, x_index=i, value_re=float(v.real), value_im=float(v.imag),
            )
    return report


def weyl_limit_check(f, system, P, N_max, x, weight="flat"):
    """Grid mean of ``|A_{N_max} f(x) - int f|``."""
    if not isinstance(system, CircleRotation):
        raise DomainError("the equidistribution check runs on a circle rotation")
    vals = ergodic_average(system, f, np.atleast_1d(x), N_max, P, weight)
    return float(np.mean(np.abs(vals - f.integral)))


# ---------------------------------------------------------------------------
# Whitney-filtered averages


def _bump_weights(decomp, fracs):
    """Sparse ``phi_J({P(n)})``: arrays ``(n_index, J_index, value)``.

    Bumps live inside (0, 1), so only ``k = floor P(n)`` contributes to
    ``phi_J(P(n) - k)``, and only the interval holding ``{P(n)}`` and its two
    neighbours can be nonzero there.
    """
    fracs = np.asarray(fracs, dtype=float)
    base = np.searchsorted(decomp.breaks, fracs, side="right") - 1
    rows, cols, vals = [], [], []
    for shift in (-1, 0, 1):
        j = base + shift
        ok = (j >= 0) & (j < len(decomp))
        idx = np.flatnonzero(ok)
        v = np.array([decomp.phi(int(jj), fr) for jj, fr in zip(j[idx], fracs[idx])], dtype=float)
        nz = v != 0
        rows.append(idx[nz])
        cols.append(j[idx][nz])
        vals.append(v[nz])
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def whitney_components(f, N, P, decomp=None, weight="flat"):
    """``{J index: A_{N,J} f}`` with ``A_{N,J} f(x) = sum_k sum_n w_N(n) phi_J(P(n) - k) f(x + k)``.

    Also returns a truncation record: the weight carried by times ``n`` whose
    fractional part falls where the truncated family does not sum to 1.
    """
    if decomp is None:
        decomp = whitney(20)
    if not isinstance(decomp, WhitneyDecomposition):
        raise DomainError("decomp must be a WhitneyDecomposition")
    f = FiniteSupport(f)
    n, w = weights(N, weight)
    floors, fracs = orbit_exponents(P, n[-1])
    floors = np.array([floors[i - 1] for i in n], dtype=np.int64)
    fracs = fracs[n - 1]
    rows, cols, vals = _bump_weights(decomp, fracs)
    comps = {}
    order = np.argsort(cols, kind="stable")
    rows, cols, vals = rows[order], cols[order], vals[order]
    starts = np.flatnonzero(np.r_[True, np.diff(cols) != 0])
    ends = np.r_[starts[1:], cols.size]
    for a, b in zip(starts, ends):
        r = rows[a:b]
        coef = w[r] * vals[a:b]
        # (T^k f)(x) = f(x + k) lives on keys - k
        keys = (f.keys[None, :] - floors[r][:, None]).ravel()
        values = (coef[:, None] * f.values[None, :]).ravel()
        comps[int(cols[a])] = FiniteSupport.from_arrays(keys, values)
    total = decomp.partition_sum(fracs)
    truncation = {
        "deficient_times": int(np.sum(np.abs(1 - total) > 0)),
        "deficient_weight": float(np.sum(w * np.abs(1 - total))),
        "min_distance_to_integer": float(np.min(np.minimum(fracs, 1 - fracs))),
    }
    return comps, truncation


def whitney_average(f, J, N, P, decomp=None, weight="flat"):
    """``A_{N,J} f`` for the ``J``-th Whitney interval as a :class:`FiniteSupport`."""
    comps, _ = whitney_components(f, N, P, decomp, weight)
    return comps.get(int(J), FiniteSupport({}))


def shift_average(f, N, P, weight="flat"):
    """``A_N f = sum_n w_N(n) T^{floor P(n)} f`` on the integer shift."""
    f = FiniteSupport(f)
    n, w = weights(N, weight)
    floors, _ = orbit_exponents(P, n[-1])
    m = np.array([floors[i - 1] for i in n], dtype=np.int64)
    keys = (f.keys[None, :] - m[:, None]).ravel()
    values = (w[:, None] * f.values[None, :]).ravel()
    return FiniteSupport.from_arrays(keys, values)


def whitney_rotation_component(f, system, P, N, J, x, decomp, weight="flat"):
    """``A_{N,J} f(x) = sum_n w_N(n) phi_J({P(n)}) f(x + floor(P(n)) alpha)`` on the circle."""
    n, w = weights(N, weight)
    floors, fracs = orbit_exponents(P, n[-1])
    floors = [floors[i - 1] for i in n]
    phi = decomp.phi(int(J), fracs[n - 1])
    orbit = _orbit_values(system, f, x, floors)
    return orbit @ (w * phi)


__all__.append("shift_average")
