from __future__ import annotations

import time

import pytest

from vbsfloer import load_dataset

DATASETS = ("fig8", "fig8-cover2")


@pytest.fixture(scope="session")
def fig8():
    return load_dataset("fig8")


@pytest.fixture(scope="session")
def cover2():
    return load_dataset("fig8-cover2")


@pytest.fixture(scope="session", params=DATASETS)
def instance(request):
    return load_dataset(request.param)


_verdicts: dict[str, str] = {}
_started: list[float] = []
SUITE_BUDGET = 60.0


def pytest_sessionstart(session):
    _started.append(time.perf_counter())


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _verdicts[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_verdicts):
        terminalreporter.write_line(f"{_verdicts[name]}  {name}")
    elapsed = time.perf_counter() - _started[0]
    verdict = "PASS" if elapsed < SUITE_BUDGET else "FAIL"
    terminalreporter.write_line(f"{verdict}  suite wall time {elapsed:.1f} s (budget {SUITE_BUDGET:.0f} s)")
