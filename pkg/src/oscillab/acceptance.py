"""The acceptance criteria as runnable checks.

Each ``criterion_*`` function takes keyword parameters (defaults are the
acceptance budgets), a global ``seed`` and a ``quick`` flag that shrinks the
budgets for smoke runs, and returns an :class:`ExperimentReport` whose
summary carries ``passed`` plus the measured quantities. Wall-clock limits
are part of each criterion and are checked as ``runtime_pass``.

Random streams: criterion ``c`` draws from ``default_rng([seed, 100 + c, i])``
or passes ``seed`` to a module-level routine with its own counter scheme.
"""

import math
import os
import time

import numpy as np

from .ergodic import (
    CircleRotation,
    FiniteSupport,
    Indicator,
    TrigPolynomial,
    average_series,
    shift_average,
    tail_diameters,
    whitney_components,
)
from .expsums import error_scan, half_bin_grid, vdc_phi, weyl_sum
from .martingale import conditional_expectation, grid_norm, random_dyadic_function
from .normlab import OperatorSpec, estimate_ratio, frequency_set_for, growth_scan
from .oracles import enumerate_jump_count, enumerate_variation
from .oscillation import (
    batch_jump_counts,
    batch_r_variation,
    block_v2_bound,
    jump_count,
    r_variation,
)
from .partitions import whitney
from .polynomial import GOLDEN, SQRT2, RealPolynomial
from .projections import PeriodicSignal, Projector, random_frequency_set
from .report import ExperimentReport, least_squares_fit

__all__ = ["CRITERIA", "DEFAULTS", "QUICK", "run_criterion", "sqrt2_square"]


def _rng(seed, criterion, index=0):
    return np.random.default_rng([int(seed), 100 + criterion, int(index)])


def _gauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sqrt2_square():
    return RealPolynomial.monomial(SQRT2, 2, name="sqrt2*n^2")


def _finish(report, start, limit, **summary):
    elapsed = time.perf_counter() - start
    report.summary.update(summary)
    report.summary["runtime_seconds"] = elapsed
    report.summary["runtime_limit_seconds"] = limit
    report.summary["runtime_pass"] = bool(elapsed < limit)
    checks = [v for k, v in report.summary.items() if k.endswith("_pass")]
    report.summary["passed"] = bool(all(checks))
    return report


# ---------------------------------------------------------------------------
# 1. oracle equivalence


def criterion_oracle(sequences=1000, max_length=10, lambdas=(0.1, 0.5, 1.0, 2.0),
                     rs=(1.0, 1.5, 2.0, 3.0, math.inf), rel_tol=1e-12, time_limit=60.0, seed=0):
    start = time.perf_counter()
    rng = _rng(seed, 1)
    report = ExperimentReport("oracle_equivalence", ["sequence", "length", "statistic", "param", "dp", "oracle", "match"])
    jump_bad = var_bad = 0
    worst = 0.0
    for i in range(sequences):
        n = int(rng.integers(1, max_length + 1))
        a = _gauss(rng, n)
        for lam in lambdas:
            dp, ex = jump_count(a, lam), enumerate_jump_count(a, lam)
            ok = dp == ex
            jump_bad += not ok
            if not ok or i < 3:
                report.add(sequence=i, length=n, statistic="jump", param=lam, dp=dp, oracle=ex, match=ok)
        for r in rs:
            dp, ex = r_variation(a, r), enumerate_variation(a, r)
            rel = abs(dp - ex) / max(abs(ex), 1e-300) if ex else abs(dp)
            worst = max(worst, rel)
            ok = rel <= rel_tol
            var_bad += not ok
            if not ok or i < 3:
                report.add(sequence=i, length=n, statistic="variation", param=r, dp=dp, oracle=ex, match=ok)
    return _finish(
        report, start, time_limit,
        sequences=sequences, jump_mismatches=jump_bad, variation_mismatches=var_bad,
        worst_relative_error=worst, oracle_matches=bool(jump_bad == 0 and var_bad == 0),
        oracle_pass=bool(jump_bad == 0 and var_bad == 0),
    )


# ---------------------------------------------------------------------------
# 2. elementary inequalities


def criterion_inequalities(sequences=10000, max_log_length=6, lambdas=(0.1, 0.5, 1.0, 2.0),
                           rs=(1.0, 1.5, 2.0, 3.0, math.inf), rounding=1e-12, time_limit=120.0, seed=0):
    """Zero violations; ``rounding`` is a relative float margin for ties, not a tolerance on the bound."""
    start = time.perf_counter()
    rng = _rng(seed, 2)
    logs = rng.integers(1, max_log_length + 1, size=sequences)
    counts = {"jump_vs_variation": 0, "v2_vs_l2": 0, "block_vs_v2": 0, "monotone_in_r": 0}
    report = ExperimentReport("inequality_suite", ["length", "sequences", "check", "violations"])
    finite = [r for r in rs if np.isfinite(r)]
    for n in range(1, max_log_length + 1):
        rows = int(np.sum(logs == n))
        if rows == 0:
            continue
        x = _gauss(rng, (rows, 1 << n))
        var = {r: batch_r_variation(x, r) for r in rs}
        jumps = batch_jump_counts(x, list(lambdas))
        slack = lambda v: v * (1 + rounding)  # noqa: E731
        c = {}
        c["jump_vs_variation"] = sum(
            int(np.sum(lam * jumps[:, j] ** (1.0 / r) > slack(var[r])))
            for j, lam in enumerate(lambdas) for r in finite
        )
        l2 = np.sqrt(np.sum(np.abs(x) ** 2, axis=1))
        c["v2_vs_l2"] = int(np.sum(var[2.0] > slack(2 * l2)))
        blocks = np.array([block_v2_bound(row) for row in x])
        c["block_vs_v2"] = int(np.sum(var[2.0] > slack(blocks)))
        ordered = sorted(rs)
        c["monotone_in_r"] = sum(int(np.sum(var[b] > slack(var[a]))) for a, b in zip(ordered, ordered[1:]))
        for k, v in c.items():
            counts[k] += v
            report.add(length=1 << n, sequences=rows, check=k, violations=v)
    total = sum(counts.values())
    return _finish(report, start, time_limit, sequences=sequences, violations=counts, total_violations=total,
                   inequalities_pass=bool(total == 0))


# ---------------------------------------------------------------------------
# 3. martingales


def criterion_martingale(identity_functions=500, identity_depth=12, trials=500, depths=(8, 10, 12, 14),
                         r=2.1, slope_max=0.05, constant_spread=2.0, tol=1e-12, time_limit=600.0,
                         seed=0, workers=1):
    start = time.perf_counter()
    worst_tower = worst_contract = 0.0
    b = identity_depth
    for i in range(identity_functions):
        f = random_dyadic_function(b, _rng(seed, 3, i))
        rng = _rng(seed, 3, 10**6 + i)
        j, k = sorted(int(v) for v in rng.integers(0, b + 1, size=2))
        # E_j E_k = E_k for j <= k, and E_k E_j = E_k
        ek = conditional_expectation(f, k).samples
        worst_tower = max(
            worst_tower,
            float(np.max(np.abs(conditional_expectation(conditional_expectation(f, k), j).samples - ek))),
            float(np.max(np.abs(conditional_expectation(conditional_expectation(f, j), k).samples - ek))),
        )
        worst_contract = max(worst_contract, grid_norm(ek) - grid_norm(f.samples))
    report = ExperimentReport("lepingle", ["depth", "jump_ratio", "jump_witness", "variation_ratio", "variation_constant"])
    jump, consts = [], []
    for depth in depths:
        ej = estimate_ratio(OperatorSpec("martingale_jump", depth=depth), trials=trials, seed=seed, ascent_steps=0, workers=workers)
        ev = estimate_ratio(OperatorSpec("martingale_variation", r=r, depth=depth), trials=trials, seed=seed, ascent_steps=0, workers=workers)
        const = ev.ratio / (r / (r - 2))
        jump.append(ej.ratio)
        consts.append(const)
        report.add(depth=depth, jump_ratio=ej.ratio, jump_witness=ej.witness, variation_ratio=ev.ratio, variation_constant=const)
    _, slope, rms = least_squares_fit(depths, jump)
    spread = max(consts) / min(consts)
    return _finish(
        report, start, time_limit,
        tower_error=worst_tower, contraction_excess=worst_contract,
        identities_pass=bool(worst_tower <= tol and worst_contract <= tol),
        jump_slope=slope, jump_fit_rms=rms, max_jump_ratio=max(jump),
        jump_bounded_pass=bool(np.all(np.isfinite(jump)) and slope <= slope_max),
        fitted_constant=max(consts), constant_spread=spread,
        variation_pass=bool(spread <= constant_spread),
    )


# ---------------------------------------------------------------------------
# 4. projection structure


def criterion_projections(pairs=100, size=1 << 14, length=64.0, k_min=-2, k_max=5, max_set=8,
                          norm_tol=1e-10, time_limit=120.0, seed=0):
    start = time.perf_counter()
    nest_bad = norm_bad = mod_bad = 0
    worst_norm = -np.inf
    scales = list(range(k_min, k_max + 1))
    for i in range(pairs):
        rng = _rng(seed, 4, i)
        lam = random_frequency_set(int(rng.integers(1, max_set + 1)), rng)
        f = PeriodicSignal(_gauss(rng, size), length)
        proj = Projector(lam, size, length)
        rough = {k: proj.rough(f, k) for k in scales}
        norm = f.norm()
        for ia, k in enumerate(scales):
            worst_norm = max(worst_norm, rough[k].norm() - norm)
            norm_bad += rough[k].norm() > norm + norm_tol
            for l in scales[ia:]:
                # Xi_k Xi_l f == Xi_l f, bin by bin
                nest_bad += not np.array_equal(proj.rough(rough[l], k).spectrum, rough[l].spectrum)
        # modulation by m bins shifts every frequency by m / L
        m = int(rng.integers(-8, 9))
        g = f.modulate(m)
        shifted = Projector(lam.shift(m / length), size, length)
        for k in scales:
            mod_bad += not np.array_equal(shifted.rough(g, k).spectrum, np.roll(rough[k].spectrum, m))
    report = ExperimentReport("projection_structure", ["check", "violations"])
    for name, v in (("nesting", nest_bad), ("contraction", norm_bad), ("modulation", mod_bad)):
        report.add(check=name, violations=int(v))
    return _finish(report, start, time_limit, pairs=pairs, worst_norm_excess=float(worst_norm),
                   nesting_pass=bool(nest_bad == 0), contraction_pass=bool(norm_bad == 0),
                   modulation_pass=bool(mod_bad == 0))


# ---------------------------------------------------------------------------
# 5. multi-frequency growth


def criterion_growth(N_list=(2, 4, 8, 16, 32, 64, 128), trials=200, ascent_steps=64, power_steps=100,
                     rms_fraction=0.15, size=1 << 16, length=64.0, k_min=-2, k_max=5,
                     time_limit=1800.0, seed=0, workers=1):
    """Maximal-operator ratios must increase strictly in N and fit ``c0 + c2 log^2 N``.

    The jump comparison is relative growth over the scanned range:
    ``fit_log(N_max) / fit_log(N_min)`` for the jump ratio against
    ``fit_log2(N_max) / fit_log2(N_min)`` for the maximal ratio.
    """
    start = time.perf_counter()
    grid = dict(size=size, length=length, k_min=k_min, k_max=k_max)
    maximal = growth_scan(OperatorSpec("maximal", **grid), N_list, trials, seed, ascent_steps, power_steps, workers)
    jump = growth_scan(OperatorSpec("jump", **grid), N_list, trials, seed, ascent_steps, 0, workers)
    report = ExperimentReport("projection_growth", maximal.columns)
    for row in maximal.rows + jump.rows:
        report.add(**row)
    ratios = np.array(maximal.column("ratio"))
    increasing = bool(np.all(np.diff(ratios) > 0))
    fit2 = maximal.summary["log2_fit"]
    rng_ = maximal.summary["ratio_range"]
    fit_ok = bool(fit2["c2"] >= 0 and fit2["residual_rms"] < rms_fraction * rng_) if rng_ > 0 else False
    lo, hi = math.log(min(N_list)), math.log(max(N_list))
    jf = jump.summary["log_fit"]
    jump_growth = (jf["c0"] + jf["c1"] * hi) / (jf["c0"] + jf["c1"] * lo)
    max_growth = (fit2["c0"] + fit2["c2"] * hi**2) / (fit2["c0"] + fit2["c2"] * lo**2)
    return _finish(
        report, start, time_limit,
        maximal_ratios=ratios.tolist(), jump_ratios=jump.column("ratio"),
        maximal_log_fit=maximal.summary["log_fit"], maximal_log2_fit=fit2,
        jump_log_fit=jf, jump_log2_fit=jump.summary["log2_fit"],
        maximal_range=rng_, jump_relative_growth=jump_growth, maximal_relative_growth=max_growth,
        increasing_pass=increasing, log2_fit_pass=fit_ok,
        jump_vs_maximal_pass=bool(jump_growth <= max_growth),
    )


# ---------------------------------------------------------------------------
# 6. Weyl sums


def criterion_weyl(q_max=500, constant=3.0, exponent=-0.4, gauss_q=5, tol=1e-12, time_limit=60.0, seed=0):
    start = time.perf_counter()
    report = ExperimentReport("weyl_sums", ["q", "sums", "max_abs", "bound", "violations"])
    over_one = bound_bad = 0
    worst_ratio = 0.0
    for q in range(1, q_max + 1):
        r = np.arange(1, q + 1, dtype=np.int64)
        a2 = np.array([a for a in range(q) if math.gcd(a, q) == 1], dtype=np.int64)
        r2 = (r * r) % q
        mx = 0.0
        for a1 in (0, 1):
            h = (a2[:, None] * r2[None, :] + a1 * r[None, :]) % q
            s = np.abs(np.mean(np.exp(-2j * np.pi * h / q), axis=1))
            mx = max(mx, float(s.max()))
        bound = constant * q**exponent
        over_one += mx > 1 + tol
        bad = int(mx > bound)
        bound_bad += bad
        worst_ratio = max(worst_ratio, mx / bound)
        if bad or q <= 10 or q % 50 == 0:
            report.add(q=q, sums=2 * a2.size, max_abs=mx, bound=bound, violations=bad)
    gauss = abs(weyl_sum(gauss_q, [0, 1]))
    err = abs(gauss - gauss_q**-0.5)
    return _finish(report, start, time_limit, unit_bound_violations=over_one, decay_violations=bound_bad,
                   worst_bound_ratio=worst_ratio, gauss_error=err,
                   unit_pass=bool(over_one == 0), decay_pass=bool(bound_bad == 0), gauss_pass=bool(err <= tol))


# ---------------------------------------------------------------------------
# 7. van der Corput


def criterion_vdc(points=1024, degrees=(2, 3), N_list=(16, 64), beta_range=(-0.5, 0.5), constant=3.0,
                  tol=1e-10, time_limit=120.0, seed=0):
    start = time.perf_counter()
    b = float(SQRT2)
    report = ExperimentReport("vdc_phi", ["d", "N", "phi_at_zero", "max_bound_ratio", "violations"])
    zero_bad = bad = 0
    worst = 0.0
    beta = half_bin_grid(points, *beta_range)
    for d in degrees:
        for N in N_list:
            at0 = abs(vdc_phi(N, 0.0, b, d))
            zero_bad += abs(at0 - 1) > tol
            phi = np.abs(vdc_phi(N, beta, b, d))
            bound = constant * (1 + N**d * abs(b) * np.abs(beta)) ** (-1.0 / d)
            ratio = float(np.max(phi / bound))
            v = int(np.sum(phi > bound))
            bad += v
            worst = max(worst, ratio)
            report.add(d=d, N=N, phi_at_zero=at0, max_bound_ratio=ratio, violations=v)
    return _finish(report, start, time_limit, worst_bound_ratio=worst,
                   zero_pass=bool(zero_bad == 0), decay_pass=bool(bad == 0))


# ---------------------------------------------------------------------------
# 8. multiplier error decay


def criterion_multiplier(N_list=tuple(1 << k for k in range(8, 15)), delta0=1 / 3, grid_size=1 << 12,
                         slope_max=-0.05, time_limit=1200.0, seed=0):
    start = time.perf_counter()
    report = error_scan(N_list, sqrt2_square(), 0, delta0, grid_size, seed)
    errs = report.column("sup_error")
    slope = report.summary["loglog_slope"]
    return _finish(report, start, time_limit, slope_pass=bool(slope <= slope_max),
                   endpoint_pass=bool(errs[-1] < errs[0]))


# ---------------------------------------------------------------------------
# 9. ergodic convergence proxy


def criterion_ergodic(points=100, N0_list=(1 << 10, 1 << 11, 1 << 12, 1 << 13), N_max=1 << 16,
                      factor=0.7, R=1, time_limit=900.0, seed=0):
    """Per-doubling decay of the grid-mean tail diameter, as a geometric mean.

    With ``D(N_0)`` the mean over grid points of the diameter of
    ``{A_N f(x) : N in I_R, N_0 <= N <= N_max}``, the check is
    ``(D(N_0,last) / D(N_0,first))^(1/doublings) <= factor``.
    """
    start = time.perf_counter()
    P = sqrt2_square()
    system = CircleRotation(GOLDEN)
    x = half_bin_grid(points)
    observables = {"e(x)": TrigPolynomial({1: 1.0}), "1_[0,1/3)": Indicator(0.0, 1.0 / 3.0)}
    report = ExperimentReport("ergodic_convergence", ["observable", "N_0", "tail_diameter", "grid_p_norm", "step_factor"])
    doublings = math.log2(N0_list[-1] / N0_list[0])
    summary = {}
    passes = []
    for name, f in observables.items():
        tab = tail_diameters(average_series(system, f, x, P, R, N_max), N0_list)
        d = tab.column("tail_diameter")
        for i, row in enumerate(tab.rows):
            step = d[i] / d[i - 1] if i else float("nan")
            report.add(observable=name, step_factor=step, **row)
        per = (d[-1] / d[0]) ** (1.0 / doublings)
        summary[f"{name}_per_doubling"] = per
        summary[f"{name}_overall"] = d[-1] / d[0]
        passes.append(per <= factor)
    const = average_series(system, TrigPolynomial({0: 0.3 + 0.1j}), x, P, R, N_max)
    const_ok = bool(np.all(const.values == 0.3 + 0.1j))
    return _finish(report, start, time_limit, **summary, factor=factor, N_max=N_max,
                   decay_pass=bool(all(passes)), constant_pass=const_ok)


# ---------------------------------------------------------------------------
# 10. Whitney reconstruction


def criterion_whitney(grid_depth=20, points=1 << 16, N_list=(1 << 6, 1 << 8), sum_tol=1e-10,
                      reconstruction_tol=1e-8, overlap_max=40, time_limit=300.0, seed=0):
    start = time.perf_counter()
    decomp = whitney(grid_depth)
    edge = 2.0 * 2.0**-grid_depth
    x = half_bin_grid(points)
    x = x[(x >= edge) & (x <= 1 - edge)]
    sum_err = float(np.max(np.abs(decomp.partition_sum(x) - 1)))
    overlap = decomp.overlap_constant(20)
    per_size = decomp.per_size_counts()
    report = ExperimentReport("whitney_check", ["N", "components", "reconstruction_error", "deficient_times"])
    P = sqrt2_square()
    rng = _rng(seed, 10)
    keys = rng.choice(np.arange(-50, 50), size=12, replace=False)
    f = FiniteSupport(dict(zip(keys.tolist(), _gauss(rng, 12).tolist())))
    worst = 0.0
    for N in N_list:
        comps, trunc = whitney_components(f, N, P, decomp)
        total = FiniteSupport({})
        for c in comps.values():
            total = total + c
        err = total.max_difference(shift_average(f, N, P))
        worst = max(worst, err)
        report.add(N=N, components=len(comps), reconstruction_error=err, deficient_times=trunc["deficient_times"])
    C = max(per_size.values())
    return _finish(
        report, start, time_limit, partition_sum_error=sum_err, overlap_constant=overlap,
        per_size_constant=C, sizes=len(per_size), reconstruction_error=worst,
        sum_pass=bool(sum_err <= sum_tol), reconstruction_pass=bool(worst <= reconstruction_tol),
        overlap_pass=bool(overlap <= overlap_max), per_size_pass=bool(all(v <= C for v in per_size.values())),
    )


CRITERIA = {
    1: ("oracle", criterion_oracle),
    2: ("inequalities", criterion_inequalities),
    3: ("martingale", criterion_martingale),
    4: ("projections", criterion_projections),
    5: ("growth", criterion_growth),
    6: ("weyl", criterion_weyl),
    7: ("vdc", criterion_vdc),
    8: ("multiplier", criterion_multiplier),
    9: ("ergodic", criterion_ergodic),
    10: ("whitney", criterion_whitney),
}


def _defaults(fn):
    import inspect

    return {k: p.default for k, p in inspect.signature(fn).parameters.items() if k not in ("seed", "workers")}


DEFAULTS = {name: _defaults(fn) for name, fn in CRITERIA.values()}

# reduced budgets for smoke runs; results are labelled quick and do not count as acceptance
QUICK = {
    "oracle": {"sequences": 100},
    "inequalities": {"sequences": 1000},
    "martingale": {"identity_functions": 20, "trials": 20, "depths": (6, 8, 10)},
    "projections": {"pairs": 10, "size": 1 << 12},
    "growth": {"N_list": (2, 8, 32), "trials": 6, "ascent_steps": 4, "power_steps": 10, "size": 1 << 12},
    "weyl": {"q_max": 100},
    "vdc": {"points": 128},
    "multiplier": {"N_list": (1 << 8, 1 << 10, 1 << 12), "grid_size": 1 << 10},
    "ergodic": {"points": 20, "N0_list": (1 << 8, 1 << 9, 1 << 10), "N_max": 1 << 12},
    "whitney": {"grid_depth": 14, "points": 1 << 12, "N_list": (1 << 6,)},
}


def run_criterion(name, params=None, seed=0, quick=False, workers=1):
    """Run one criterion by name with parameter overrides; returns the report."""
    fn = dict(CRITERIA.values())[name]
    kwargs = dict(QUICK.get(name, {})) if quick else {}
    kwargs.update(params or {})
    if "workers" in fn.__code__.co_varnames:
        kwargs["workers"] = workers
    report = fn(seed=seed, **kwargs)
    report.summary["quick"] = bool(quick)
    return report


def default_workers():
    return os.cpu_count() or 1
