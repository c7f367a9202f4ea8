"""Empirical operator-norm ratios for maximal, jump and variation operators.

Nothing here certifies a norm. Every number is ``||O f|| / ||f||`` for some
explicit input ``f``, so it is a lower bound for the operator norm, found by
adversarial search over a few input families.

Seeding is counter based: the random stream for item ``i`` of stream ``s``
under global seed ``g`` is ``numpy.random.default_rng([g, s, i])``. Trials can
be farmed out to threads, but the reduction always runs in trial order, so the
result never depends on the worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .martingale import DyadicFunction, lepingle_jump_ratios, lepingle_variation_ratio, martingale_paths
from .oscillation import batch_jump_counts, batch_r_variation
from .partitions import PHI
from .projections import Projector, ScaleRange, random_frequency_set
from .report import ExperimentReport, least_squares_fit

__all__ = [
    "OperatorSpec",
    "EmpiricalNormEstimate",
    "InterpolationResult",
    "LAMBDA_GRID",
    "rng_for",
    "weak_norm",
    "operator_ratio",
    "estimate_ratio",
    "growth_scan",
    "interpolation_check",
    "GROWTH_COLUMNS",
    "frequency_set_for",
    "weak_variation_ratio",
]

KINDS = (
    "identity",
    "maximal",
    "smooth_maximal",
    "jump",
    "variation",
    "martingale_maximal",
    "martingale_jump",
    "martingale_variation",
)

# altitudes for sup_lambda, relative to unit root-mean-square input
LAMBDA_GRID = 2.0 ** np.arange(-6, 2)

STREAM_TRIALS = 0
STREAM_ASCENT = 1
STREAM_FREQUENCIES = 2

GROWTH_COLUMNS = ["operator", "N", "k_min", "k_max", "param", "ratio", "strategy", "seed", "trials"]


def rng_for(seed, stream, index):
    return np.random.default_rng([int(seed), int(stream), int(index)])


@dataclass(frozen=True)
class OperatorSpec:
    """Which operator to probe, on which grid.

    ``lam=None`` for the jump kinds means the supremum over :data:`LAMBDA_GRID`.
    Martingale kinds act on ``2**depth`` samples of [0, 1).
    """

    kind: str
    lam: float = None
    r: float = None
    k_min: int = -2
    k_max: int = 5
    length: float = 64.0
    size: int = 1 << 16
    depth: int = 12

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown operator kind {self.kind!r}")
        if self.kind in ("variation", "martingale_variation"):
            if self.r is None or self.r < 1:
                raise DomainError("r-variation needs r >= 1")
            if self.kind == "martingale_variation" and not self.r > 2:
                raise DomainError("the martingale variation bound needs r > 2")
        if self.lam is not None and not self.lam > 0:
            raise DomainError("altitude must be positive")
        if self.kind == "smooth_maximal" and self.k_max < 1:
            raise DomainError("smooth projections need scales k >= 1")
        if not self.is_martingale:
            ScaleRange(self.k_min, self.k_max).check(self.length)

    @property
    def is_martingale(self):
        return self.kind.startswith("martingale")

    @property
    def scales(self):
        lo = max(self.k_min, 1) if self.kind == "smooth_maximal" else self.k_min
        return list(range(lo, self.k_max + 1))

    @property
    def param(self):
        if self.kind in ("jump", "martingale_jump"):
            return "sup" if self.lam is None else self.lam
        if self.kind in ("variation", "martingale_variation"):
            return self.r
        return ""

    @property
    def linearizable(self):
        return self.kind in ("maximal", "smooth_maximal")


@dataclass(frozen=True)
class EmpiricalNormEstimate:
    ratio: float
    witness: str
    seed: int
    trials: int
    strategy: str


@dataclass(frozen=True)
class InterpolationResult:
    passed: bool
    margin: float
    bound: float
    implied_constant: float


def weak_norm(values, weight, p=2):
    """``sup_t t * mu{|F| > t}^(1/p)`` over a dyadic grid of levels ``t``.

    ``weight`` is the measure of one grid point.
    """
    a = np.sort(np.abs(np.ravel(values)))
    if a.size == 0 or a[-1] == 0:
        return 0.0
    top = int(np.ceil(np.log2(a[-1])))
    levels = 2.0 ** np.arange(top - 40, top + 1)
    above = a.size - np.searchsorted(a, levels, side="right")
    return float(np.max(levels * (above * weight) ** (1.0 / p)))


# ---------------------------------------------------------------------------
# operator evaluation


class _Model:
    """Operator application for one spec and one frequency set."""

    def __init__(self, spec, lambda_set=None):
        self.spec = spec
        if spec.is_martingale:
            self.projector = None
            return
        if spec.kind == "identity":
            self.projector = None
            return
        if lambda_set is None:
            raise DomainError("projection operators need a frequency set")
        self.projector = Projector(lambda_set, spec.size, spec.length)
        p = self.projector
        if spec.kind == "smooth_maximal":
            self.mults = np.array([PHI(2.0**k * p.dist) for k in spec.scales])
        else:
            self.mults = np.array([p.rough_mask(k) for k in spec.scales], dtype=float)

    # inputs are spectra (FFT order) for projection kinds, samples for martingales
    def norm(self, x):
        if self.spec.is_martingale:
            return float(np.sqrt(np.mean(np.abs(x) ** 2)))
        return float(np.sqrt(np.sum(np.abs(x) ** 2) / self.spec.length))

    def stack(self, spec_arr):
        scale = self.spec.size / self.spec.length
        return np.fft.ifft(self.mults * spec_arr[None, :], axis=1) * scale

    def pointwise(self, x):
        """Pointwise output and the measure of one grid point."""
        s = self.spec
        if s.is_martingale:
            paths = martingale_paths(DyadicFunction(x))
            w = 1.0 / paths.shape[0]
            if s.kind == "martingale_maximal":
                return np.abs(paths).max(axis=1), w
            if s.kind == "martingale_variation":
                return batch_r_variation(paths, s.r), w
            return None, w
        w = s.length / s.size
        if s.kind == "identity":
            return np.fft.ifft(x) * (s.size / s.length), w
        rows = self.stack(x)
        if s.kind in ("maximal", "smooth_maximal"):
            return np.abs(rows).max(axis=0), w
        if s.kind == "variation":
            return batch_r_variation(rows.T, s.r), w
        return rows, w

    def ratio(self, x):
        s = self.spec
        norm = self.norm(x)
        if norm == 0:
            raise DomainError("zero input")
        if s.kind == "martingale_jump":
            f = DyadicFunction(x / norm)
            lams = LAMBDA_GRID if s.lam is None else [s.lam]
            return float(np.max(lepingle_jump_ratios(f, lams)))
        if s.kind == "martingale_variation":
            return lepingle_variation_ratio(DyadicFunction(x), s.r)
        out, w = self.pointwise(x)
        if s.kind == "jump":
            # unit root-mean-square input so that the altitude grid is absolute
            rms = norm / np.sqrt(s.length)
            paths = np.ascontiguousarray(out.T) / rms
            lams = LAMBDA_GRID if s.lam is None else np.array([s.lam])
            counts = batch_jump_counts(paths, lams)
            vals = lams * np.sqrt(np.sum(counts, axis=0) * w)
            return float(np.max(vals) * rms / norm)
        return float(np.sqrt(np.sum(np.abs(out) ** 2) * w) / norm)


def operator_ratio(spec, x, lambda_set=None):
    """``||O f|| / ||f||`` for one input (a spectrum, or samples for martingale kinds)."""
    return _Model(spec, lambda_set).ratio(np.asarray(x, dtype=complex))


# ---------------------------------------------------------------------------
# input families


def _gaussian(model, rng):
    s = model.spec
    n = (1 << s.depth) if s.is_martingale else s.size
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z if s.is_martingale else np.fft.fft(z)


def _comb(model, rng):
    """Spectral bumps at every frequency with random width, offset, phase and profile."""
    s = model.spec
    if s.is_martingale:
        return _haar_packets(s.depth, rng)
    if model.projector is None:
        return _gaussian(model, rng)
    p = model.projector
    freqs = p.freqs
    spec = np.zeros(s.size, dtype=complex)
    style = rng.integers(0, 3)
    common = 2.0 ** -rng.uniform(s.k_min - 1, s.k_max + 1)
    for theta in p.lam.thetas:
        width = common if style == 1 else 2.0 ** -rng.uniform(s.k_min - 1, s.k_max + 1)
        offset = rng.uniform(-1, 1) * width
        u = (freqs - theta - offset) / width
        near = np.abs(u) < 1
        phase = np.exp(2j * np.pi * rng.random())
        if style == 0:
            prof = near.astype(float)
        elif style == 1:
            prof = PHI(0.5 * u)
        else:
            # equal energy per dyadic annulus around theta
            d = np.maximum(np.abs(freqs - theta), 1.0 / s.length)
            prof = np.where(np.abs(freqs - theta) < width, d**-0.5, 0.0)
            k = int(near.sum()) or 1
            prof = prof * (rng.standard_normal(s.size) + 1j * rng.standard_normal(s.size)) / np.sqrt(k)
        spec += phase * prof
    if not np.any(spec):
        return _gaussian(model, rng)
    return spec


def _haar_packets(depth, rng):
    """Sum of Haar functions with equal energy per level and random signs."""
    n = 1 << depth
    f = np.zeros(n, dtype=complex)
    for level in range(1, depth + 1):
        w = 1 << level
        coef = rng.standard_normal(n // w) + 1j * rng.standard_normal(n // w)
        h = np.concatenate([np.ones(w // 2), -np.ones(w // 2)])
        f += np.kron(coef, h)
    return f


_FAMILIES = (("gaussian", _gaussian), ("comb", _comb))


# ---------------------------------------------------------------------------
# search


def _selection_power(model, x, steps):
    """Alternate between choosing the maximising scale at each point and a power step."""
    best, best_x = model.ratio(x), x
    size = np.linalg.norm(x)
    for _ in range(steps):
        rows = model.stack(x)
        pick = np.abs(rows).argmax(axis=0)
        val = np.take_along_axis(rows, pick[None, :], 0)[0]
        new = np.zeros_like(x)
        for i in range(rows.shape[0]):
            new += model.mults[i] * np.fft.fft(np.where(pick == i, val, 0))
        if not np.any(new):
            break
        x = new * (size / np.linalg.norm(new))
        r = model.ratio(x)
        if r > best:
            best, best_x = r, x
    return best, best_x


def _ascent(model, x, steps, seed):
    best = model.ratio(x)
    active = np.flatnonzero(np.abs(x) > 0)
    if active.size == 0:
        return best, x
    typical = np.sqrt(np.mean(np.abs(x[active]) ** 2))
    for step in range(steps):
        rng = rng_for(seed, STREAM_ASCENT, step)
        j = active[rng.integers(active.size)]
        trial = x.copy()
        trial[j] += typical * (rng.standard_normal() + 1j * rng.standard_normal())
        if not np.any(trial):
            continue
        r = model.ratio(trial)
        if r > best:
            best, x = r, trial
    return best, x


def estimate_ratio(spec, lambda_set=None, trials=64, seed=0, ascent_steps=32, power_steps=0, workers=1):
    """Largest observed ``||O f|| / ||f||`` over random families plus refinement.

    Trials alternate between iid complex Gaussian samples and frequency combs.
    The best candidate is refined by coordinate ascent on single bins (single
    samples for martingales) and, for maximal operators with
    ``power_steps > 0``, by alternating scale selection and power steps.
    """
    if trials < 1:
        raise DomainError("budget must allow at least one trial")
    model = _Model(spec, lambda_set)

    def run(i):
        name, family = _FAMILIES[i % len(_FAMILIES)]
        x = family(model, rng_for(seed, STREAM_TRIALS, i))
        return model.ratio(x), i, name, x

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(i) for i in range(trials)]
    best, idx, strategy, x = results[0]
    for r, i, name, cand in results[1:]:
        if r > best:
            best, idx, strategy, x = r, i, name, cand
    witness = f"{strategy} trial {idx}"

    if ascent_steps:
        r, x2 = _ascent(model, x, ascent_steps, seed)
        if r > best:
            best, x, strategy = r, x2, "ascent"
            witness += f" + ascent({ascent_steps})"
    if power_steps and spec.linearizable:
        r, x2 = _selection_power(model, x, power_steps)
        if r > best:
            best, x, strategy = r, x2, "selection-power"
            witness += f" + selection-power({power_steps})"
    return EmpiricalNormEstimate(float(best), witness, int(seed), int(trials), strategy)


def frequency_set_for(n, seed):
    return random_frequency_set(n, rng_for(seed, STREAM_FREQUENCIES, n))


def growth_scan(spec, n_list, trials=64, seed=0, ascent_steps=32, power_steps=0, workers=1):
    """Ratios for each ``N`` with log and log² least-squares fits."""
    n_list = list(n_list)
    if not n_list:
        raise DomainError("empty N list")
    report = ExperimentReport(f"growth_{spec.kind}", list(GROWTH_COLUMNS))
    for n in n_list:
        est = estimate_ratio(spec, frequency_set_for(n, seed), trials, seed, ascent_steps, power_steps, workers)
        report.add(
            operator=spec.kind, N=n, k_min=spec.k_min, k_max=spec.k_max, param=spec.param,
            ratio=est.ratio, strategy=est.strategy, seed=seed, trials=trials,
        )
    ns = np.array(n_list, dtype=float)
    ratios = np.array(report.column("ratio"))
    c0, c1, rms1 = least_squares_fit(np.log(ns), ratios)
    d0, c2, rms2 = least_squares_fit(np.log(ns) ** 2, ratios)
    report.summary.update(
        log_fit={"c0": c0, "c1": c1, "residual_rms": rms1},
        log2_fit={"c0": d0, "c2": c2, "residual_rms": rms2},
        ratio_range=float(ratios.max() - ratios.min()),
    )
    return report


def interpolation_check(A, B, p, r, measured, C=1.0):
    """Compare a measured weak-type variation ratio with ``C (A (r/(r-2))^(1/2+1/p) + B)``."""
    if not r > 2:
        raise DomainError(f"need r > 2, got {r!r}")
    bound = C * (A * (r / (r - 2)) ** (0.5 + 1.0 / p) + B)
    implied = measured / (bound / C) if bound > 0 else (0.0 if measured == 0 else np.inf)
    return InterpolationResult(bool(measured <= bound), float(bound - measured), float(bound), float(implied))


def weak_variation_ratio(spec, x, lambda_set=None):
    """``||V^r||_{L^{2,inf}} / ||f||_2`` for a variation spec and one input."""
    if spec.kind not in ("variation", "martingale_variation"):
        raise DomainError("weak ratio is defined for variation operators")
    model = _Model(spec, lambda_set)
    if spec.is_martingale:
        paths = martingale_paths(DyadicFunction(x))
        v, w = batch_r_variation(paths, spec.r), 1.0 / paths.shape[0]
    else:
        v, w = model.pointwise(np.asarray(x, dtype=complex))
    return weak_norm(v, w) / model.norm(np.asarray(x, dtype=complex))
