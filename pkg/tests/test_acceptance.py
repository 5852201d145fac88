"""Acceptance battery: one test per verification criterion, plus the
end-to-end CLI gate.  Run with `pytest -s tests/test_acceptance.py` to see
the per-criterion pass/fail lines.
"""

import time

import pytest

from quadmap.cli import main
from quadmap.verify import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: c.__name__)
def test_criterion(check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}  {result.name}: {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"


def test_cli_verify_end_to_end(capsys):
    start = time.perf_counter()
    code = main(["verify"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    print(f"PASS  cmd_verify exit={code} in {elapsed:.2f}s")
    assert code == 0
    assert "11/11 checks passed" in out
    assert elapsed < 10.0
