"""The fourteen acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible with ``pytest -s`` and in
the summary of ``opsf all``).
"""
import pytest

from opsf.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number)
    print(res.line())
    if not res.passed:
        print("    detail:", res.detail)
    assert res.ok, res.detail
    assert res.seconds < res.limit, f"took {res.seconds:.1f}s, limit {res.limit}s"
