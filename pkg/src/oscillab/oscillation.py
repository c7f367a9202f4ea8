"""Jump counts, r-variation and the elementary oscillation inequalities.

All statistics are exact: they are computed by quadratic-time dynamic
programming over indices, never by greedy scans. For a sequence
``a_0, ..., a_{n-1}``

* ``jump_count(a, lam)`` is the largest ``M`` such that some indices
  ``k_0 < ... < k_M`` have ``|a_{k_i} - a_{k_{i-1}}| > lam`` for every ``i``;
* ``r_variation(a, r)`` is the supremum over increasing index chains of
  ``(sum_i |a_{k_i} - a_{k_{i-1}}|**r)**(1/r)``, and the diameter for
  ``r = inf``.

The ``batch_*`` kernels evaluate the same recursions for many sequences at
once (one sequence per row) and are what the operator-level code uses.
"""

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DomainError

__all__ = [
    "ComplexSequence",
    "ScalePartition",
    "jump_count",
    "r_variation",
    "block_v2_bound",
    "split_jump_bound",
    "random_dyadic_partition",
    "batch_jump_count",
    "batch_jump_counts",
    "batch_r_variation",
    "batch_diameter",
]


@dataclass(frozen=True)
class ComplexSequence:
    """A finite ordered list of complex scalars with optional integer labels."""

    values: np.ndarray
    labels: np.ndarray = field(default=None)

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if values.ndim != 1 or values.size < 1:
            raise DomainError("a sequence needs at least one term")
        object.__setattr__(self, "values", values)
        if self.labels is None:
            labels = np.arange(values.size)
        else:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != values.shape:
                raise DomainError("labels and values differ in length")
            if np.any(np.diff(labels) <= 0):
                raise DomainError("labels must be strictly increasing")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class ScalePartition:
    """Disjoint contiguous index blocks ``[a_n, b_n]`` (inclusive), in order."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((int(a), int(b)) for a, b in self.blocks)
        if not blocks:
            raise DomainError("a partition needs at least one block")
        for a, b in blocks:
            if b < a:
                raise DomainError(f"empty block [{a}, {b}]")
        for (_, b0), (a1, _) in zip(blocks, blocks[1:]):
            if a1 != b0 + 1:
                raise DomainError("blocks must be contiguous and increasing")
        object.__setattr__(self, "blocks", blocks)

    @property
    def start(self):
        return self.blocks[0][0]

    @property
    def stop(self):
        return self.blocks[-1][1]

    def covers(self, n):
        return self.start == 0 and self.stop == n - 1


def _values(seq):
    if isinstance(seq, ComplexSequence):
        return seq.values
    return ComplexSequence(seq).values


def _check_lambda(lam):
    if not lam > 0:
        raise DomainError(f"altitude must be positive, got {lam!r}")


def _check_r(r):
    if np.isnan(r) or r < 1:
        raise DomainError(f"r-variation needs r >= 1 (or inf), got {r!r}")


@numba.njit(cache=True)
def _jump_dp(diff_abs, lam):
    n = diff_abs.shape[0]
    best = np.zeros(n, dtype=np.int64)
    top = 0
    for j in range(1, n):
        b = 0
        for i in range(j):
            if diff_abs[i, j] > lam and best[i] + 1 > b:
                b = best[i] + 1
        best[j] = b
        if b > top:
            top = b
    return top


@numba.njit(cache=True)
def _variation_dp(diff_abs, r):
    # diff_abs is pre-scaled so the largest entry is 1
    n = diff_abs.shape[0]
    best = np.zeros(n)
    top = 0.0
    for j in range(1, n):
        b = 0.0
        for i in range(j):
            v = best[i] + diff_abs[i, j] ** r
            if v > b:
                b = v
        best[j] = b
        if b > top:
            top = b
    return top


def _abs_diffs(a):
    return np.abs(a[None, :] - a[:, None])


def jump_count(seq, lam):
    """Exact jump-counting function ``N_lam`` of a sequence.

    Ties do not count: an increment must strictly exceed ``lam``.
    """
    a = _values(seq)
    _check_lambda(lam)
    if a.size == 1:
        return 0
    return int(_jump_dp(_abs_diffs(a), float(lam)))


def r_variation(seq, r):
    """Exact ``r``-variation for ``1 <= r < inf``; the diameter for ``r = inf``."""
    a = _values(seq)
    r = float(r)
    _check_r(r)
    if a.size == 1:
        return 0.0
    d = _abs_diffs(a)
    scale = d.max()
    if scale == 0:
        return 0.0
    if np.isinf(r):
        return float(scale)
    return float(scale * _variation_dp(d / scale, r) ** (1.0 / r))


def block_v2_bound(seq):
    """Dyadic-block upper bound for the 2-variation.

    For ``a_0, ..., a_{2^n}`` returns::

        2 * sum_{m <= n} ( sum_{s < 2^(n-m)} |a_{(s+1) 2^m} - a_{s 2^m}|^2 )^(1/2)

    A sequence of length ``2^n`` is edge-extended by repeating its last term,
    which leaves every oscillation statistic unchanged.
    """
    a = _values(seq)
    size = a.size
    if size >= 2 and _is_pow2(size - 1):
        pass
    elif _is_pow2(size):
        a = np.append(a, a[-1])
    else:
        raise DomainError(f"length must be 2^n or 2^n + 1, got {size}")
    n = (a.size - 1).bit_length() - 1
    total = 0.0
    for m in range(n + 1):
        step = 1 << m
        coarse = a[::step]
        total += np.sqrt(np.sum(np.abs(np.diff(coarse)) ** 2))
    return float(2.0 * total)


def _is_pow2(x):
    return x >= 1 and (x & (x - 1)) == 0


def split_jump_bound(seq, part, lam):
    """Both sides of the block-splitting bound for ``lam * N_lam^(1/2)``.

    Returns ``(lhs, rhs)`` with ``lhs = lam * N_lam(a)^(1/2)`` and::

        rhs = (sum_n lam^2 N_{lam/10}(a restricted to I_n))^(1/2)
              + lam * N_{lam/10}(a_{b_n} : n)^(1/2)

    The inequality ``lhs <= C * rhs`` holds with an unspecified constant, so
    both sides are returned for fitting.
    """
    a = _values(seq)
    _check_lambda(lam)
    if not isinstance(part, ScalePartition):
        part = ScalePartition(part)
    if not part.covers(a.size):
        raise DomainError("partition does not cover the index range")
    lhs = lam * np.sqrt(jump_count(a, lam))
    inner = sum(lam**2 * jump_count(a[lo:hi + 1], lam / 10) for lo, hi in part.blocks)
    ends = a[[hi for _, hi in part.blocks]]
    rhs = np.sqrt(inner) + lam * np.sqrt(jump_count(ends, lam / 10))
    return float(lhs), float(rhs)


def random_dyadic_partition(n, rng):
    """Random partition of ``range(n)`` with cuts at multiples of a random ``2^j``."""
    step = 1 << int(rng.integers(0, max(1, n.bit_length())))
    cuts = [c for c in range(step, n, step) if rng.random() < 0.5]
    edges = [0] + cuts + [n]
    return ScalePartition(tuple((lo, hi - 1) for lo, hi in zip(edges, edges[1:])))


# batched kernels: one sequence per row --------------------------------------


@numba.njit(cache=True)
def _batch_jumps(x, lams):
    p, n = x.shape
    nl = lams.shape[0]
    out = np.zeros((p, nl), dtype=np.int64)
    d = np.empty((n, n))
    best = np.empty(n, dtype=np.int64)
    for row in range(p):
        for i in range(n):
            for j in range(i + 1, n):
                d[i, j] = abs(x[row, j] - x[row, i])
        for li in range(nl):
            lam = lams[li]
            top = 0
            best[0] = 0
            for j in range(1, n):
                b = 0
                for i in range(j):
                    if d[i, j] > lam and best[i] + 1 > b:
                        b = best[i] + 1
                best[j] = b
                if b > top:
                    top = b
            out[row, li] = top
    return out


@numba.njit(cache=True)
def _batch_variation(x, r):
    p, n = x.shape
    out = np.zeros(p)
    d = np.empty((n, n))
    best = np.empty(n)
    for row in range(p):
        scale = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                v = abs(x[row, j] - x[row, i])
                d[i, j] = v
                if v > scale:
                    scale = v
        if scale == 0.0:
            continue
        top = 0.0
        best[0] = 0.0
        for j in range(1, n):
            b = 0.0
            for i in range(j):
                v = best[i] + (d[i, j] / scale) ** r
                if v > b:
                    b = v
            best[j] = b
            if b > top:
                top = b
        out[row] = scale * top ** (1.0 / r)
    return out


def _rows(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[1] < 1:
        raise DomainError("expected a 2-d array with one sequence per row")
    return np.ascontiguousarray(x)


def batch_jump_counts(x, lams):
    """Jump counts for every row of ``x`` and every altitude; shape ``(rows, len(lams))``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    for lam in lams:
        _check_lambda(lam)
    return _batch_jumps(_rows(x), lams)


def batch_jump_count(x, lam):
    return batch_jump_counts(x, [lam])[:, 0]


def batch_diameter(x):
    x = _rows(x)
    # diameter is attained between two terms; pairwise over the short axis
    n = x.shape[1]
    out = np.zeros(x.shape[0])
    for i in range(n):
        np.maximum(out, np.abs(x[:, i + 1:] - x[:, i:i + 1]).max(axis=1, initial=0.0), out=out)
    return out


def batch_r_variation(x, r):
    """``r``-variation of every row of ``x``."""
    r = float(r)
    _check_r(r)
    if np.isinf(r):
        return batch_diameter(x)
    return _batch_variation(_rows(x), r)
