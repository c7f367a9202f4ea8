"""Smooth compactly supported bumps and a Whitney partition of unity on [0, 1).

Every bump is built from the ramp ``H(t) = g(t) / (g(t) + g(1 - t))`` with
``g(t) = exp(-1/t)`` for ``t > 0``, which is C^infinity, equal to 0 for
``t <= 0`` and to 1 for ``t >= 1``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedConfiguration

__all__ = [
    "smooth_step",
    "SmoothBump",
    "make_bump",
    "PHI",
    "CHI",
    "PSI",
    "SECTION_CUTOFF",
    "psi0_profile",
    "WhitneyDecomposition",
    "whitney",
    "derivative_bound_check",
]


def _g(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C^infinity step: 0 for ``t <= 0``, 1 for ``t >= 1``, strictly between otherwise."""
    t = np.asarray(t, dtype=float)
    a = _g(t)
    b = _g(1.0 - t)
    return a / (a + b)


@dataclass(frozen=True)
class SmoothBump:
    """Even bump equal to 1 on ``|x - center| <= inner`` and 0 on ``|x - center| >= outer``."""

    inner: float
    outer: float
    center: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        dist = np.abs(x - self.center)
        out = smooth_step((self.outer - dist) / (self.outer - self.inner))
        return out if out.ndim else float(out)

    @property
    def support(self):
        return (self.center - self.outer, self.center + self.outer)

    def dilate(self, scale):
        """``x -> bump(scale * x)``, another bump with shrunken radii."""
        return SmoothBump(self.inner / scale, self.outer / scale, self.center / scale)


def make_bump(inner, outer, center=0.0):
    if not 0 < inner < outer:
        raise DomainError(f"need 0 < inner < outer, got inner={inner}, outer={outer}")
    return SmoothBump(float(inner), float(outer), float(center))


# 1_[-1/4,1/4] <= PHI <= 1_(-1/2,1/2): smooth multi-frequency projections
PHI = make_bump(0.25, 0.5)
# same sandwich, used as the major-arc cutoff
CHI = make_bump(0.25, 0.5)
# 1_[1/2,1] <= PSI <= 1_[-1/4,2], supported in (1/4, 5/4) so PSI vanishes near 0
PSI = make_bump(0.25, 0.5, 0.75)
# 1_[-3/4,3/4] <= SECTION_CUTOFF <= 1_(-1,1)
SECTION_CUTOFF = make_bump(0.75, 1.0)


def psi0_profile(d, psi=PSI):
    """Return ``s -> psi(s**(1/d)) / (d * s**(1 - 1/d))`` for ``s > 0``, and 0 otherwise.

    With ``psi`` vanishing near 0 the profile is smooth and compactly supported,
    and ``int e(-u s) psi0(s) ds = int e(-u t**d) psi(t) dt`` for ``t > 0``.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"degree must be a positive integer, got {d!r}")
    d = int(d)

    def psi0(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        pos = s > 0
        sp = s[pos]
        out[pos] = psi(sp ** (1.0 / d)) / (d * sp ** (1.0 - 1.0 / d))
        return out if out.ndim else float(out)

    return psi0


@dataclass
class WhitneyDecomposition:
    """Dyadic intervals ``J = [left, left + size)`` ordered left to right, with bumps.

    ``phi_J = rho_i - rho_{i+1}`` where ``rho_i`` is a smooth step centred at
    the left endpoint of the ``i``-th interval (and ``rho_K`` at the right end
    of the last one). The ramp half-width at each breakpoint is half the
    smaller neighbouring interval, so ``supp phi_J`` sits inside the
    concentric interval of length ``4|J|`` and the bumps telescope to 1.
    """

    grid_depth: int
    lefts: np.ndarray
    sizes: np.ndarray
    breaks: np.ndarray
    halfwidths: np.ndarray

    def __len__(self):
        return self.lefts.size

    @property
    def rights(self):
        return self.lefts + self.sizes

    def _rho(self, i, x):
        w = self.halfwidths[i]
        return smooth_step((x - self.breaks[i] + w) / (2 * w))

    def phi(self, i, x):
        """Bump ``phi_J`` of the ``i``-th interval evaluated at ``x``."""
        x = np.asarray(x, dtype=float)
        return self._rho(i, x) - self._rho(i + 1, x)

    def enlarged(self, i, factor):
        """Concentric dilate ``factor * J`` as a ``(lo, hi)`` pair."""
        c = self.lefts[i] + 0.5 * self.sizes[i]
        h = 0.5 * factor * self.sizes[i]
        return c - h, c + h

    def support(self, i):
        return self.breaks[i] - self.halfwidths[i], self.breaks[i + 1] + self.halfwidths[i + 1]

    def locate(self, x):
        """Index of the interval containing each point, or -1 outside the family."""
        x = np.asarray(x, dtype=float)
        i = np.searchsorted(self.lefts, x, side="right") - 1
        inside = (i >= 0) & (x < self.rights[np.clip(i, 0, None)])
        return np.where(inside, i, -1)

    def partition_sum(self, x):
        """``sum_J phi_J(x)``; only the interval holding ``x`` and its neighbours contribute."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        i = np.searchsorted(self.breaks, x, side="right") - 1
        total = np.zeros_like(x)
        for shift in (-1, 0, 1):
            j = i + shift
            ok = (j >= 0) & (j < len(self))
            jj = np.clip(j, 0, len(self) - 1)
            w0, w1 = self.halfwidths[jj], self.halfwidths[jj + 1]
            r0 = smooth_step((x - self.breaks[jj] + w0) / (2 * w0))
            r1 = smooth_step((x - self.breaks[jj + 1] + w1) / (2 * w1))
            total += np.where(ok, r0 - r1, 0.0)
        return total

    def overlap_constant(self, factor=20, points=None):
        """Largest number of dilates ``factor * J`` containing a common point."""
        if points is None:
            points = np.linspace(0, 1, 1 << 16, endpoint=False) + 2.0 ** -(self.grid_depth + 9)
        c = self.lefts + 0.5 * self.sizes
        lo = np.sort(c - 0.5 * factor * self.sizes)
        hi = np.sort(c + 0.5 * factor * self.sizes)
        counts = np.searchsorted(lo, points, side="right") - np.searchsorted(hi, points, side="right")
        return int(counts.max())

    def per_size_counts(self):
        sizes, counts = np.unique(self.sizes, return_counts=True)
        return dict(zip(sizes.tolist(), counts.tolist()))

    def boundary_residual(self, samples=1 << 14):
        """Measure-weighted L¹ norm of ``1 - sum_J phi_J`` on (0, 1)."""
        edge = 4.0 * 2.0**-self.grid_depth
        # the residual lives within `edge` of 0 and 1; integrate there finely
        total = 0.0
        for a, b in ((0.0, edge), (1.0 - edge, 1.0)):
            x = a + (np.arange(samples) + 0.5) * (b - a) / samples
            total += np.sum(np.abs(1.0 - self.partition_sum(x))) * (b - a) / samples
        return float(total)


def whitney(grid_depth):
    """Whitney family of [0, 1) truncated at scale ``2**-grid_depth`` near the ends.

    On the left half, scale ``2**-n`` contributes ``J = [k 2^-n, (k+1) 2^-n)``
    for ``64 <= k < 128``, so ``|J|`` is between ``dist(J, 0)/128`` and
    ``dist(J, 0)/64``; the right half is the mirror image. Scales run from
    ``n = 8`` down to ``n = grid_depth + 6``, which covers
    ``[2**-grid_depth, 1 - 2**-grid_depth)``.
    """
    if int(grid_depth) != grid_depth or grid_depth < 8:
        raise DomainError(f"grid_depth must be an integer >= 8, got {grid_depth!r}")
    g = int(grid_depth)
    left_l, left_s = [], []
    for n in range(g + 6, 7, -1):
        h = 2.0**-n
        for k in range(64, 128):
            left_l.append(k * h)
            left_s.append(h)
    left_l = np.array(left_l)
    left_s = np.array(left_s)
    right_l = (1.0 - left_l - left_s)[::-1]
    right_s = left_s[::-1]
    lefts = np.concatenate([left_l, right_l])
    sizes = np.concatenate([left_s, right_s])
    breaks = np.append(lefts, lefts[-1] + sizes[-1])
    neighbour = np.minimum(np.append(sizes, sizes[-1]), np.insert(sizes, 0, sizes[0]))
    return WhitneyDecomposition(g, lefts, sizes, breaks, 0.5 * neighbour)


_STENCILS = {
    0: ([0], [1.0]),
    1: ([-1, 1], [-0.5, 0.5]),
    2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
    3: ([-2, -1, 1, 2], [-0.5, 1.0, -1.0, 0.5]),
}


def derivative_bound_check(decomp, alpha, indices=None, points=2049):
    """``max_J |J|**alpha * max |d^alpha phi_J|`` via central differences at step ``|J|/2**10``."""
    if alpha not in _STENCILS:
        raise UnsupportedConfiguration("derivatives of order above 3 are not checked numerically")
    offsets, weights = _STENCILS[alpha]
    if indices is None:
        indices = range(len(decomp))
    worst = 0.0
    for i in indices:
        size = decomp.sizes[i]
        h = size / 2**10
        lo, hi = decomp.support(i)
        x = np.linspace(lo - 4 * h, hi + 4 * h, points)
        deriv = sum(w * decomp.phi(i, x + o * h) for o, w in zip(offsets, weights)) / h**alpha
        worst = max(worst, float(size**alpha * np.max(np.abs(deriv))))
    return worst
