from pathlib import Path

import numpy as np
import pytest

from capos import BuildParams, FormalDecisionContext, build_context
from capos.datasets import load_fixture

HERE = Path(__file__).resolve().parent


def pytest_addoption(parser):
    parser.addoption(
        "--uci-dir",
        default=str(HERE / "data" / "uci"),
        help="directory holding downloaded UCI files for the dataset criteria",
    )


@pytest.fixture(scope="session")
def uci_dir(request):
    return Path(request.config.getoption("--uci-dir"))


@pytest.fixture(scope="session")
def watermelon_raw():
    return load_fixture("watermelon")


@pytest.fixture(scope="session")
def watermelon(watermelon_raw):
    ctx, _ = build_context(watermelon_raw)
    return ctx


@pytest.fixture(scope="session")
def balloons_raw():
    return load_fixture("balloons")


@pytest.fixture
def tree_params():
    return BuildParams(alpha=0.9, beta=0.15, min_split=4)


def random_context(rng, max_objects=64, max_attributes=10):
    n = int(rng.integers(1, max_objects + 1))
    k = int(rng.integers(1, max_attributes + 1))
    density = rng.uniform(0.1, 0.9)
    inc = (rng.random((n, k)) < density).astype(np.uint8)
    dec = (rng.random(n) < rng.uniform(0.1, 0.9)).astype(np.uint8)
    return FormalDecisionContext.from_rows([f"m{j}" for j in range(k)], inc, dec)


# acceptance summary: one line per criterion

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        _criteria[name] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria.items():
        label = name[len("test_criterion_"):]
        terminalreporter.write_line(f"{outcome:4}  {label}")
