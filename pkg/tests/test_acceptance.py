"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py [numbers...]`` or via
pytest (``pytest tests/test_acceptance.py -v``).  Trial counts and tolerances
live in :mod:`grassfeed.acceptance`.
"""

import sys

import pytest

from grassfeed import acceptance

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    res = acceptance.run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail


if __name__ == "__main__":
    wanted = [int(a) for a in sys.argv[1:]] or None
    results = acceptance.run_all(wanted, echo=lambda s: print(s, flush=True))
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    sys.exit(0 if all(r.passed for r in results) else 1)
