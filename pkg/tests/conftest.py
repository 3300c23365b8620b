import numpy as np
import pytest

from netsurv import LifeTable, Sex

# Collected acceptance-criterion results, echoed in the terminal summary so
# the one-line-per-criterion report survives pytest's output capture.
ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def record_criterion():
    """Log one pass/fail line per acceptance criterion, then assert it."""

    def record(num, name, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        line = f"criterion {num:2d} [{status}] {name}{suffix}"
        ACCEPTANCE_LOG.append(line)
        print(line, flush=True)
        assert ok, line

    return record


def make_flat_table(rate, ages=(50, 95), years=(1960, 1995)):
    return LifeTable(
        {
            (age, Sex.MALE, year): rate
            for age in range(ages[0], ages[1] + 1)
            for year in range(years[0], years[1] + 1)
        }
    )


@pytest.fixture(scope="session")
def flat_table():
    """Constant 0.025/year male table, wide enough for any sim profile."""
    return make_flat_table(0.025)


@pytest.fixture(scope="session")
def zero_table():
    return make_flat_table(0.0)
