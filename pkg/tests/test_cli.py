import json

import pytest
import yaml

from oscillab.cli import EXPERIMENTS, main, validate, ConfigError


def test_stats_oracle_quick(tmp_path, capsys):
    code = main(["--experiment", "stats-oracle", "--quick", "--out", str(tmp_path), "--threads", "1"])
    assert code == 0
    summary = json.loads((tmp_path / "stats-oracle" / "summary.json").read_text())
    assert summary["passed"] and summary["checks"]["oracle"]["oracle_matches"]
    assert "delta0" in summary["deviations"]
    assert "PASS oracle" in capsys.readouterr().out


def test_bad_config_lists_every_path(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text(yaml.safe_dump({
        "experiment": "projection-growth",
        "colour": "red",
        "params": {"growth": {"trials": -3, "N_list": [8, 4]}, "nope": {}},
    }))
    assert main(["--config", str(cfg)]) == 2
    err = capsys.readouterr().err
    for path in ("colour", "params.growth.trials", "params.growth.N_list", "params.nope"):
        assert path in err


def test_missing_experiment_and_bad_yaml(tmp_path, capsys):
    assert main([]) == 2
    bad = tmp_path / "x.yaml"
    bad.write_text("a: [1,\n")
    assert main(["--config", str(bad)]) == 2
    assert "not valid YAML" in capsys.readouterr().err


def test_validate_normalises():
    cfg = validate({"experiment": "stats-oracle", "params": {"inequalities": {"rs": [2.5, "inf"]}}})
    assert cfg["params"]["inequalities"]["rs"] == (2.5, float("inf"))
    with pytest.raises(ConfigError):
        validate({"experiment": "nope", "seed": -1})
    assert set(EXPERIMENTS["acceptance-all"]) >= {"oracle", "growth", "whitney"}


def test_env_override_and_determinism(tmp_path, monkeypatch):
    outputs = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        monkeypatch.setenv("OSCILLAB_OUT", str(out))
        assert main(["--experiment", "multiplier-error", "--quick", "--out", str(tmp_path / "ignored"), "--seed", "5"]) == 0
        outputs.append(sorted((out / "multiplier-error").glob("*.csv")))
    assert not (tmp_path / "ignored").exists()
    assert outputs[0] and [p.read_bytes() for p in outputs[0]] == [p.read_bytes() for p in outputs[1]]


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "oscillab", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "--experiment" in res.stdout
