"""Runs every acceptance criterion at its stated tolerance.

One PASS/FAIL line per criterion is printed and repeated in the terminal
summary.  The full run takes a few minutes, dominated by the
indistinguishability game.
"""

import pytest

import conftest
from bsfe import acceptance

NUMBERS = [n for n, _, _ in acceptance.CHECKS] + [12]


@pytest.fixture(scope="module")
def outcomes():
    return {o.number: o for o in acceptance.run_all()}


@pytest.mark.acceptance
@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(outcomes, number):
    o = outcomes[number]
    line = o.line()
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert o.passed, line
