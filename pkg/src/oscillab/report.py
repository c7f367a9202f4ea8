"""Experiment reports: fixed-column CSV rows plus a JSON summary."""

import csv
import datetime
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Parameters that differ from the values the theory is stated with.
DEVIATIONS = {
    "delta0": "1/3 instead of <= 1/100 (2^s <= N^delta0 would be vacuous at desk scale)",
    "rho": "2^8 stands in for the 2^(N^10) window of the exceptional scale set",
    "precision": "irrational coefficients are 60-digit decimal surrogates",
    "domain": "periodic grids and [0,1) dyadic models stand in for L^2(R)",
    "major_arcs": "monomial Q(t) = b_d t^d only; denominators q = 1 (s = 0) included",
}


def _plain(value):
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def config_hash(config):
    blob = json.dumps(_plain(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ExperimentReport:
    """Rows with a fixed column order, a summary, and honest-labelling metadata."""

    name: str
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def add(self, **row):
        missing = set(self.columns) - set(row)
        extra = set(row) - set(self.columns)
        if missing or extra:
            raise ValueError(f"row columns mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
        self.rows.append({c: _plain(row[c]) for c in self.columns})

    def column(self, name):
        return [r[name] for r in self.rows]

    @property
    def passed(self):
        flags = [v for k, v in self.summary.items() if k.endswith("_pass") or k == "passed"]
        return all(flags) if flags else True

    def stamp(self, config=None, seed=None, deviations=()):
        self.metadata.setdefault("experiment", self.name)
        self.metadata["config_hash"] = config_hash(config or {})
        self.metadata["seed"] = seed
        self.metadata["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        self.metadata["deviations"] = {k: DEVIATIONS[k] for k in deviations}
        return self

    def write_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=self.columns, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _fmt(v) for k, v in row.items()})
        return path

    def write_json(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"metadata": self.metadata, "summary": self.summary, "columns": self.columns}
        path.write_text(json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n")
        return path

    def write(self, out_dir):
        out_dir = Path(out_dir)
        return self.write_csv(out_dir / f"{self.name}.csv"), self.write_json(out_dir / f"{self.name}.json")


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def least_squares_fit(x, y):
    """Fit ``y ~ c0 + c1 x``; returns ``(c0, c1, residual_rms)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2)))
