"""Independent oracles used to validate the fast paths.

The oscillation oracles enumerate every increasing index chain of a short
sequence (at most a dozen terms) and share no code with the dynamic programs
in :mod:`oscillab.oscillation`. The multiplier oracle sums directly in
high-precision floating point.
"""

from functools import lru_cache
from itertools import combinations

import numpy as np

MAX_LENGTH = 12


@lru_cache(maxsize=None)
def _chains(n):
    """All chains of length >= 2 as consecutive-pair index arrays, padded with -1."""
    starts, ends = [], []
    for size in range(2, n + 1):
        for idx in combinations(range(n), size):
            pad = [-1] * (n - size)
            starts.append(list(idx[:-1]) + pad)
            ends.append(list(idx[1:]) + pad)
    return np.array(starts, dtype=int).reshape(-1, max(n - 1, 0)), np.array(ends, dtype=int).reshape(-1, max(n - 1, 0))


def _increments(a):
    a = np.asarray(a, dtype=complex)
    n = a.size
    if n > MAX_LENGTH:
        raise ValueError(f"enumeration limited to {MAX_LENGTH} terms")
    if n < 2:
        return None, None
    lo, hi = _chains(n)
    mask = lo >= 0
    inc = np.where(mask, np.abs(a[np.where(mask, hi, 0)] - a[np.where(mask, lo, 0)]), 0.0)
    return inc, mask


def enumerate_jump_count(a, lam):
    inc, mask = _increments(a)
    if inc is None:
        return 0
    ok = np.all((inc > lam) | ~mask, axis=1)
    lengths = mask.sum(axis=1)
    return int(lengths[ok].max(initial=0))


def enumerate_variation(a, r):
    inc, mask = _increments(a)
    if inc is None:
        return 0.0
    if np.isinf(r):
        return float(inc.max())
    return float(np.max(np.sum(np.where(mask, inc, 0.0) ** r, axis=1)) ** (1.0 / r))


def multiplier_mp(N, xi, beta, coefficients, dps=120):
    """Flat ``m_N`` by direct summation in ``dps``-digit floating point.

    ``coefficients`` are decimal strings ``b_1, ..., b_d`` (``b_0`` is
    irrelevant); the whole phase ``(xi - beta) Q(n)`` is formed at ``dps``
    digits before reducing, which makes this independent of the rational
    and fixed-point paths in :mod:`oscillab.expsums`.
    """
    import mpmath

    with mpmath.workdps(dps):
        b = [mpmath.mpf(c) for c in coefficients]
        delta = int(xi) - mpmath.mpf(beta)
        total = mpmath.mpc(0)
        for n in range(1, int(N) + 1):
            q = mpmath.fsum(c * mpmath.mpf(n) ** (j + 1) for j, c in enumerate(b))
            total += mpmath.expjpi(2 * delta * q)
        return complex(total / N)
