"""Every acceptance criterion at its stated budget and tolerance.

Each test prints ``PASS criterion k (name): ...`` or ``FAIL ...``; the lines
are repeated in the terminal summary. Run alone with::

    pytest tests/test_acceptance.py -v
"""

import math

import pytest

from oscillab.acceptance import CRITERIA, default_workers, run_criterion

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow


def _brief(summary):
    keep = []
    for key, value in summary.items():
        if key in ("passed", "quick") or isinstance(value, (dict, list, tuple, str)):
            continue
        if isinstance(value, float):
            value = f"{value:.4g}" if math.isfinite(value) else str(value)
        keep.append(f"{key}={value}")
    return ", ".join(keep)


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[name for _, (name, _) in sorted(CRITERIA.items())])
def test_criterion(number):
    name, _ = CRITERIA[number]
    report = run_criterion(name, seed=0, quick=False, workers=default_workers())
    line = f"{'PASS' if report.passed else 'FAIL'} criterion {number} ({name}): {_brief(report.summary)}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    failed = [k for k, v in report.summary.items() if k.endswith("_pass") and not v]
    assert report.passed, f"failed checks: {failed}"
