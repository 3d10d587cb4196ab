"""Acceptance gate: every shipped claim, one pass/fail line per criterion.

Each test drives the same criterion implementation as the `acceptance`
subcommand of the command-line harness, so the CLI report and this suite can
never disagree. Tolerances are pinned inside the criterion functions.
"""

import pytest

from rmtlab.cli import ACCEPTANCE_CRITERIA, _criterion_3


@pytest.mark.parametrize(
    ("name", "criterion"), ACCEPTANCE_CRITERIA,
    ids=[name for name, _ in ACCEPTANCE_CRITERIA])
def test_acceptance_criterion(name, criterion):
    passed, margin = criterion()
    assert passed, f"{name}: {margin}"


def test_suite_has_exactly_twelve_rows():
    assert len(ACCEPTANCE_CRITERIA) == 12


def test_broken_constant_negative_control():
    # the suite must be able to fail: a deliberately corrupted measure
    # constant has to flip the disk-quadrature row
    passed, margin = _criterion_3(break_disk_factor=True)
    assert not passed, f"negative control unexpectedly passed: {margin}"
