"""Shared fixtures and the --runslow switch."""

import pytest

from src.schemas import CodeRecord, IrsCandidate, IrsType


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run long acceptance checks"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def type2_candidate() -> IrsCandidate:
    """N=37, a=27: the first girth-10 record's generator."""
    return IrsCandidate(N=37, a=27, irs_type=IrsType.TYPE_II, m=3)


@pytest.fixture
def type1_candidate() -> IrsCandidate:
    """N=73, a=8: subgroup {1, 8, 64}."""
    return IrsCandidate(N=73, a=8, irs_type=IrsType.TYPE_I, m=4)


@pytest.fixture
def record_37() -> CodeRecord:
    return CodeRecord(N=37, a=27, type="II", m=3, n=4, g=10, gamma=[0, 1, 3, 24])
