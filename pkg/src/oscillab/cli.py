"""Command-line experiment runner.

    python -m oscillab --experiment stats-oracle --seed 0 --out results
    python -m oscillab --config run.yaml --quick

Exit status: 0 when every check passes, 1 when any check fails, 2 on a
configuration error. ``OSCILLAB_OUT`` overrides ``--out``.

Config files are YAML::

    experiment: projection-growth
    seed: 7
    threads: 1
    quick: false
    out: results
    params:
      growth:
        trials: 300
        N_list: [2, 4, 8, 16]

``params`` sections are named after the checks an experiment runs (see
``EXPERIMENTS``); their keys are the keyword arguments of the matching
``oscillab.acceptance.criterion_*`` function.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import yaml

from .acceptance import CRITERIA, DEFAULTS, default_workers, run_criterion
from .report import DEVIATIONS

EXPERIMENTS = {
    "stats-oracle": ["oracle", "inequalities"],
    "lepingle": ["martingale"],
    "projection-growth": ["projections", "growth"],
    "weyl": ["weyl", "vdc"],
    "multiplier-error": ["multiplier"],
    "ergodic-convergence": ["ergodic"],
    "whitney-check": ["whitney"],
    "acceptance-all": [name for name, _ in CRITERIA.values()],
}

TOP_KEYS = {"experiment", "seed", "out", "threads", "quick", "params"}

# keys that count things and must be >= 1; steps may be 0
_COUNTS = {
    "sequences", "max_length", "max_log_length", "identity_functions", "identity_depth", "trials",
    "pairs", "size", "max_set", "q_max", "gauss_q", "points", "grid_size", "N_max", "R", "grid_depth",
}
_STEPS = {"ascent_steps", "power_steps"}
_INT_LISTS = {"depths", "N_list", "N0_list", "degrees"}


class ConfigError(Exception):
    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = problems


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check_param(path, key, value, default):
    if key in _COUNTS:
        if not _is_int(value) or value < 1:
            return f"{path}: must be an integer >= 1, got {value!r}"
    elif key in _STEPS:
        if not _is_int(value) or value < 0:
            return f"{path}: must be an integer >= 0, got {value!r}"
    elif key in _INT_LISTS:
        if not isinstance(value, (list, tuple)) or not value or not all(_is_int(v) and v >= 1 for v in value):
            return f"{path}: must be a nonempty list of positive integers"
        if key != "degrees" and list(value) != sorted(set(value)):
            return f"{path}: must be strictly increasing"
    elif key == "lambdas":
        if not isinstance(value, (list, tuple)) or not value or not all(_is_num(v) and v > 0 for v in value):
            return f"{path}: must be a nonempty list of positive numbers"
    elif key == "rs":
        ok = isinstance(value, (list, tuple)) and value and all(
            (_is_num(v) and v >= 1) or v in ("inf", ".inf") for v in value
        )
        if not ok:
            return f"{path}: must list exponents >= 1 or 'inf'"
    elif key == "beta_range":
        if not isinstance(value, (list, tuple)) or len(value) != 2 or not all(_is_num(v) for v in value) or value[0] >= value[1]:
            return f"{path}: must be [lo, hi] with lo < hi"
    elif key in ("k_min", "k_max"):
        if not _is_int(value):
            return f"{path}: must be an integer"
    elif key == "r":
        if not _is_num(value) or value <= 2:
            return f"{path}: must exceed 2"
    elif key == "delta0":
        if not _is_num(value) or not 0 < value <= 1:
            return f"{path}: must lie in (0, 1]"
    elif key == "factor":
        if not _is_num(value) or not 0 < value <= 1:
            return f"{path}: must lie in (0, 1]"
    elif key in ("slope_max", "exponent"):
        if not _is_num(value):
            return f"{path}: must be a number"
    elif _is_num(default):
        if not _is_num(value) or value <= 0:
            return f"{path}: must be a positive number, got {value!r}"
    return None


def _normalise(key, value):
    if key == "rs":
        return tuple(math.inf if v in ("inf", ".inf") else float(v) for v in value)
    if isinstance(value, list):
        return tuple(value)
    return value


def validate(config):
    """Return a normalised config or raise :class:`ConfigError` listing every bad key path."""
    problems = []
    if not isinstance(config, dict):
        raise ConfigError(["<root>: config must be a mapping"])
    for key in sorted(set(config) - TOP_KEYS):
        problems.append(f"{key}: unknown key")
    exp = config.get("experiment")
    if exp is not None and exp not in EXPERIMENTS:
        problems.append(f"experiment: unknown experiment {exp!r} (choose from {', '.join(EXPERIMENTS)})")
    seed = config.get("seed", 0)
    if not _is_int(seed) or not 0 <= seed < 2**64:
        problems.append(f"seed: must be an integer in [0, 2^64), got {seed!r}")
    threads = config.get("threads")
    if threads is not None and (not _is_int(threads) or threads < 1):
        problems.append(f"threads: must be an integer >= 1, got {threads!r}")
    if "quick" in config and not isinstance(config["quick"], bool):
        problems.append("quick: must be true or false")
    if "out" in config and not isinstance(config["out"], str):
        problems.append("out: must be a path string")
    params = config.get("params") or {}
    clean = {}
    if not isinstance(params, dict):
        problems.append("params: must be a mapping")
        params = {}
    for section, values in params.items():
        if section not in DEFAULTS:
            problems.append(f"params.{section}: unknown section")
            continue
        if not isinstance(values, dict):
            problems.append(f"params.{section}: must be a mapping")
            continue
        clean[section] = {}
        for key, value in values.items():
            path = f"params.{section}.{key}"
            if key not in DEFAULTS[section]:
                problems.append(f"{path}: unknown key")
                continue
            msg = _check_param(path, key, value, DEFAULTS[section][key])
            if msg:
                problems.append(msg)
            else:
                clean[section][key] = _normalise(key, value)
    if problems:
        raise ConfigError(problems)
    out = dict(config)
    out["params"] = clean
    return out


def load_config(path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError([f"<file>: cannot read {path}: {exc}"]) from exc
    except yaml.YAMLError as exc:
        raise ConfigError([f"<file>: not valid YAML: {exc}"]) from exc
    return data if data is not None else {}


def build_parser():
    p = argparse.ArgumentParser(prog="oscillab", description="Run oscillation experiments and acceptance checks.")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--experiment", choices=sorted(EXPERIMENTS), help="experiment to run")
    p.add_argument("--seed", type=int, help="global seed (unsigned 64-bit)")
    p.add_argument("--out", help="output directory (OSCILLAB_OUT overrides)")
    p.add_argument("--threads", type=int, help="worker threads for independent trials (default: all cores)")
    p.add_argument("--quick", action="store_true", default=None, help="reduced budgets for a smoke run")
    return p


def run(config, echo=print):
    """Execute a validated config; returns ``(exit_code, reports)``."""
    exp = config["experiment"]
    seed = int(config.get("seed", 0))
    quick = bool(config.get("quick", False))
    workers = int(config.get("threads") or default_workers())
    out_dir = Path(config.get("out", "results")) / exp
    reports = []
    for name in EXPERIMENTS[exp]:
        report = run_criterion(name, config["params"].get(name), seed=seed, quick=quick, workers=workers)
        report.stamp({"experiment": exp, "check": name, "params": config["params"].get(name, {}),
                      "quick": quick}, seed, DEVIATIONS)
        report.write(out_dir)
        reports.append((name, report))
        echo(f"{'PASS' if report.passed else 'FAIL'} {name} ({report.summary['runtime_seconds']:.1f}s)")
    overall = {
        "experiment": exp,
        "seed": seed,
        "quick": quick,
        "checks": {name: r.summary for name, r in reports},
        "passed": all(r.passed for _, r in reports),
        "deviations": DEVIATIONS,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "summary.json").write_text(json.dumps(_jsonable(overall), indent=2, sort_keys=True) + "\n")
    return (0 if overall["passed"] else 1), reports


def _jsonable(v):
    from .report import _plain

    v = _plain(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    return v


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        if not isinstance(config, dict):
            raise ConfigError(["<root>: config must be a mapping"])
        for key in ("experiment", "seed", "out", "threads", "quick"):
            value = getattr(args, key)
            if value is not None:
                config[key] = value
        if os.environ.get("OSCILLAB_OUT"):
            config["out"] = os.environ["OSCILLAB_OUT"]
        if "experiment" not in config:
            raise ConfigError(["experiment: required (give --experiment or set it in the config)"])
        config = validate(config)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    code, _ = run(config)
    return code


if __name__ == "__main__":
    sys.exit(main())
