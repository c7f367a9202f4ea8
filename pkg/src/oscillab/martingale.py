"""Dyadic conditional expectations on [0, 1) and empirical Lépingle ratios.

A function on [0, 1) is modelled by ``2**b`` samples under uniform measure.
``E_k`` averages over dyadic blocks of ``2**k`` consecutive samples, so
``k = 0`` is the identity and ``k = b`` the global mean. The grid L² norm is
``(2**-b * sum |f_j|**2) ** (1/2)`` throughout.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .oscillation import batch_jump_counts, batch_r_variation

__all__ = [
    "DyadicFunction",
    "conditional_expectation",
    "martingale_paths",
    "grid_norm",
    "lepingle_jump_ratio",
    "lepingle_jump_ratios",
    "lepingle_variation_ratio",
    "random_dyadic_function",
]


@dataclass(frozen=True)
class DyadicFunction:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 2 or s.size & (s.size - 1):
            raise DomainError(f"need 2**b samples with b >= 1, got {s.size}")
        object.__setattr__(self, "samples", s)

    @property
    def depth(self):
        return self.samples.size.bit_length() - 1

    def __len__(self):
        return self.samples.size


def _as_dyadic(f):
    return f if isinstance(f, DyadicFunction) else DyadicFunction(f)


def grid_norm(values, p=2):
    """Grid L^p norm under uniform probability measure; ``p = inf`` is the max."""
    a = np.abs(np.asarray(values))
    if np.isinf(p):
        return float(a.max())
    return float(np.mean(a**p) ** (1.0 / p))


def conditional_expectation(f, k):
    """``E_k f``: replace every dyadic block of ``2**k`` samples by its mean."""
    f = _as_dyadic(f)
    if not 0 <= k <= f.depth:
        raise DomainError(f"level {k} outside [0, {f.depth}]")
    if k == 0:
        return DyadicFunction(f.samples.copy())
    w = 1 << k
    means = f.samples.reshape(-1, w).mean(axis=1)
    return DyadicFunction(np.repeat(means, w))


def martingale_paths(f):
    """Matrix whose row ``j`` is ``(E_0 f(x_j), E_1 f(x_j), ..., E_b f(x_j))``."""
    f = _as_dyadic(f)
    b = f.depth
    out = np.empty((f.samples.size, b + 1), dtype=complex)
    out[:, 0] = f.samples
    level = f.samples
    for k in range(1, b + 1):
        # pairwise means of the previous level give the next level exactly
        level = 0.5 * (level[0::2] + level[1::2])
        out[:, k] = np.repeat(level, 1 << k)
    return out


def _check_nonzero(f):
    norm = grid_norm(f.samples)
    if norm == 0:
        raise DomainError("the zero function has no Lépingle ratio")
    return norm


def lepingle_jump_ratios(f, lams):
    """``||lam N_lam(E_k f)^(1/2)||_2 / ||f||_2`` for each altitude in ``lams``."""
    f = _as_dyadic(f)
    norm = _check_nonzero(f)
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    counts = batch_jump_counts(martingale_paths(f), lams)
    return lams * np.sqrt(np.mean(counts, axis=0)) / norm


def lepingle_jump_ratio(f, lam):
    return float(lepingle_jump_ratios(f, [lam])[0])


def lepingle_variation_ratio(f, r):
    """``||V^r(E_k f)||_2 / ||f||_2`` for ``r > 2``."""
    if not r > 2:
        raise DomainError(f"the variational Lépingle bound needs r > 2, got {r!r}")
    f = _as_dyadic(f)
    norm = _check_nonzero(f)
    v = batch_r_variation(martingale_paths(f), r)
    return grid_norm(v) / norm


def random_dyadic_function(depth, rng):
    """Complex Gaussian samples normalised to unit grid L² norm."""
    s = rng.standard_normal(1 << depth) + 1j * rng.standard_normal(1 << depth)
    return DyadicFunction(s / grid_norm(s))
