"""Runs every acceptance criterion once and prints one PASS/FAIL line each."""
import pytest

from pppkit.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    result = run_one(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
