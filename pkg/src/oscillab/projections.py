"""Rough and smooth multi-frequency Fourier projections on periodic grids.

A :class:`PeriodicSignal` holds ``M = 2**b`` samples of a function on
``[0, L)``, ``L = 2**a``, at ``x_j = j L / M``. Its transform is::

    F f(xi_m) = (L / M) * sum_j f(x_j) e(-xi_m x_j),   xi_m = m / L,  m in [-M/2, M/2)

so Parseval reads ``(L/M) sum |f_j|^2 = (1/L) sum |F f(xi_m)|^2``.

For a frequency set ``Lam`` the rough projection ``Xi_k`` keeps exactly the
bins with ``min_theta |xi_m - theta| < 2**-k`` (open neighbourhoods, strict
inequality), and the smooth projection ``Phi_k`` multiplies by
``sum_theta phi(2**k (xi - theta))``. Spectra are cached on the signal so
that composing projections acts on identical bin arrays, which makes
``Xi_k Xi_l f == Xi_l f`` hold bit for bit when ``k <= l``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .oscillation import batch_jump_counts, batch_r_variation
from .partitions import PHI

__all__ = [
    "PeriodicSignal",
    "FrequencySet",
    "ScaleRange",
    "Jump",
    "Variation",
    "Projector",
    "component_count",
    "rough_projection",
    "smooth_projection",
    "maximal_function",
    "scale_oscillation",
    "exceptional_scales",
    "random_frequency_set",
]


def _is_pow2(x):
    return x >= 1 and (x & (x - 1)) == 0


class PeriodicSignal:
    """Uniform samples on ``[0, L)`` with a lazily cached transform."""

    def __init__(self, samples, length, spectrum=None):
        samples = np.asarray(samples, dtype=complex)
        if samples.ndim != 1 or not _is_pow2(samples.size) or samples.size < 2:
            raise DomainError(f"need 2**b samples, got {samples.shape}")
        length = float(length)
        if length <= 0 or np.log2(length) != np.round(np.log2(length)):
            raise DomainError(f"period must be a power of two, got {length}")
        self.samples = samples
        self.length = length
        self._spectrum = spectrum

    @classmethod
    def from_spectrum(cls, spectrum, length):
        spectrum = np.asarray(spectrum, dtype=complex)
        m = spectrum.size
        samples = np.fft.ifft(spectrum) * (m / length)
        return cls(samples, length, spectrum)

    @property
    def size(self):
        return self.samples.size

    @property
    def spacing(self):
        return self.length / self.size

    @property
    def x(self):
        return np.arange(self.size) * self.spacing

    @property
    def freqs(self):
        """Bin frequencies ``m / L`` in FFT order."""
        return np.fft.fftfreq(self.size, d=self.spacing)

    @property
    def nyquist(self):
        return self.size / (2.0 * self.length)

    @property
    def spectrum(self):
        if self._spectrum is None:
            self._spectrum = np.fft.fft(self.samples) * self.spacing
        return self._spectrum

    def norm(self):
        """L² norm ``((L/M) sum |f_j|^2)^(1/2)``."""
        return float(np.sqrt(self.spacing * np.sum(np.abs(self.samples) ** 2)))

    def modulate(self, m):
        """Multiply by ``e(m x / L)``; the spectrum shifts by exactly ``m`` bins."""
        m = int(m)
        phase = np.exp(2j * np.pi * ((m * np.arange(self.size)) % self.size) / self.size)
        spec = None if self._spectrum is None else np.roll(self._spectrum, m)
        return PeriodicSignal(self.samples * phase, self.length, spec)


@dataclass(frozen=True)
class FrequencySet:
    """Finite frequency set with minimal gap in ``(1, 2]``."""

    thetas: tuple

    def __post_init__(self):
        t = tuple(sorted(float(v) for v in np.atleast_1d(self.thetas)))
        if not t:
            raise DomainError("empty frequency set")
        if len(t) > 1:
            gap = min(np.diff(t))
            if not 1 < gap <= 2:
                raise DomainError(f"minimal gap must lie in (1, 2], got {gap}")
        object.__setattr__(self, "thetas", t)

    def __len__(self):
        return len(self.thetas)

    @property
    def array(self):
        return np.array(self.thetas)

    def shift(self, delta):
        return FrequencySet(tuple(t + delta for t in self.thetas))

    def fits(self, signal):
        return max(abs(t) for t in self.thetas) <= signal.nyquist - 2


@dataclass(frozen=True)
class ScaleRange:
    k_min: int
    k_max: int

    def __post_init__(self):
        if self.k_max < self.k_min:
            raise DomainError(f"empty scale range [{self.k_min}, {self.k_max}]")

    @property
    def scales(self):
        return list(range(self.k_min, self.k_max + 1))

    def __len__(self):
        return self.k_max - self.k_min + 1

    def check(self, length):
        if 2.0**-self.k_max < 2.0 / length:
            raise DomainError(
                f"scale k={self.k_max} is narrower than two bins of width 1/{length:g}"
            )


@dataclass(frozen=True)
class Jump:
    lam: float


@dataclass(frozen=True)
class Variation:
    r: float


def _as_lambda(lam):
    return lam if isinstance(lam, FrequencySet) else FrequencySet(lam)


def _check_k(k, length):
    if 2.0**-k < 2.0 / length:
        raise DomainError(f"scale k={k} is narrower than two bins of width 1/{length:g}")


def component_count(lam, radius):
    """Connected components of ``Lam + (-radius, radius)``."""
    t = _as_lambda(lam).array
    return 1 + int(np.sum(np.diff(t) >= 2 * radius))


class Projector:
    """Projections for one frequency set on one grid; caches bin-to-set distances."""

    def __init__(self, lam, size, length):
        self.lam = _as_lambda(lam)
        self.size = int(size)
        self.length = float(length)
        probe = PeriodicSignal(np.zeros(self.size), self.length)
        if not self.lam.fits(probe):
            raise DomainError("frequency set does not fit inside the band with margin 2")
        self.freqs = probe.freqs
        t = self.lam.array
        pos = np.clip(np.searchsorted(t, self.freqs), 1, max(t.size - 1, 1))
        left = np.abs(self.freqs - t[pos - 1])
        right = np.abs(self.freqs - t[np.minimum(pos, t.size - 1)])
        self.dist = np.minimum(left, right)

    def _compatible(self, f):
        if f.size != self.size or f.length != self.length:
            raise DomainError("signal grid differs from the projector grid")

    def rough_mask(self, k):
        _check_k(k, self.length)
        return self.dist < 2.0**-k

    def smooth_multiplier(self, scale):
        # at dilation >= 2 the bumps around distinct thetas are disjoint
        return PHI(scale * self.dist)

    def rough(self, f, k):
        self._compatible(f)
        return PeriodicSignal.from_spectrum(np.where(self.rough_mask(k), f.spectrum, 0), f.length)

    def smooth(self, f, k=None, r=None):
        self._compatible(f)
        if (k is None) == (r is None):
            raise DomainError("give exactly one of k (dyadic) or r (continuous)")
        if k is not None:
            if k < 1:
                raise DomainError("smooth projections need k >= 1")
            _check_k(k, self.length)
            scale = 2.0**k
        else:
            if r < 2:
                raise DomainError("continuous dilation needs r >= 2")
            scale = float(r)
        return PeriodicSignal.from_spectrum(self.smooth_multiplier(scale) * f.spectrum, f.length)

    def stack(self, f, scales, smooth=False):
        """Array of shape ``(len(scales), M)`` whose rows are ``Xi_k f`` (or ``Phi_k f``)."""
        self._compatible(f)
        spec = f.spectrum
        rows = np.empty((len(scales), self.size), dtype=complex)
        for i, k in enumerate(scales):
            mult = self.smooth_multiplier(2.0**k) if smooth else self.rough_mask(k)
            rows[i] = np.fft.ifft(mult * spec) * (self.size / self.length)
        return rows


def _projector(f, lam):
    return Projector(lam, f.size, f.length)


def rough_projection(f, lam, k):
    """``Xi_k f``: keep bins strictly inside ``Lam + (-2**-k, 2**-k)``."""
    return _projector(f, lam).rough(f, k)


def smooth_projection(f, lam, k=None, r=None):
    """``Phi_k f`` with multiplier ``sum_theta PHI(2**k (xi - theta))``, or dilation ``r``."""
    return _projector(f, lam).smooth(f, k=k, r=r)


def _range(rng, length):
    if not isinstance(rng, ScaleRange):
        rng = ScaleRange(*rng)
    rng.check(length)
    return rng


def maximal_function(f, lam, scale_range, smooth=False):
    """Pointwise ``sup_k |Xi_k f|`` over the range, as a real array on the grid."""
    rng = _range(scale_range, f.length)
    return np.abs(_projector(f, lam).stack(f, rng.scales, smooth=smooth)).max(axis=0)


def scale_oscillation(f, lam, scale_range, stat):
    """Pointwise oscillation of ``k -> Xi_k f(x_j)`` over the range.

    ``stat`` is :class:`Jump` (returns ``lam * N_lam^(1/2)``) or
    :class:`Variation` (returns ``V^r``).
    """
    rng = _range(scale_range, f.length)
    paths = _projector(f, lam).stack(f, rng.scales).T
    return pointwise_statistic(paths, stat)


def pointwise_statistic(paths, stat):
    """Apply an oscillation statistic to every row of ``paths``."""
    if isinstance(stat, Jump):
        return stat.lam * np.sqrt(batch_jump_counts(paths, [stat.lam])[:, 0])
    if isinstance(stat, Variation):
        return batch_r_variation(paths, stat.r)
    raise DomainError(f"unknown statistic {stat!r}")


def exceptional_scales(lam, scale_range, rho):
    """Scales where two frequencies are within a factor ``rho`` of ``2**-k``.

    Returns ``(E, blocks)``: ``E`` is the sorted list of ``k`` for which some
    pair satisfies ``2**-k / rho <= |theta - theta'| <= 2**-k * rho``, and
    ``blocks`` lists maximal runs ``(a, b, n)`` of consecutive scales outside
    ``E`` on which ``R_k`` has a constant number ``n`` of components.
    """
    if not rho > 1:
        raise DomainError(f"rho must exceed 1, got {rho!r}")
    lam = _as_lambda(lam)
    rng = scale_range if isinstance(scale_range, ScaleRange) else ScaleRange(*scale_range)
    t = lam.array
    gaps = np.abs(t[:, None] - t[None, :])[np.triu_indices(t.size, 1)]
    exceptional = []
    for k in rng.scales:
        r = 2.0**-k
        if np.any((gaps >= r / rho) & (gaps <= r * rho)):
            exceptional.append(k)
    blocks = []
    for k in rng.scales:
        if k in exceptional:
            continue
        n = component_count(lam, 2.0**-k)
        if blocks and blocks[-1][1] == k - 1 and blocks[-1][2] == n:
            blocks[-1] = (blocks[-1][0], k, n)
        else:
            blocks.append((k, k, n))
    return exceptional, blocks


def random_frequency_set(n, rng):
    """``n`` frequencies with independent gaps uniform in ``(1, 2]``, centred at 0."""
    gaps = 2.0 - rng.random(max(n - 1, 0))
    t = np.concatenate([[0.0], np.cumsum(gaps)])
    return FrequencySet(tuple(t - 0.5 * t[-1]))
