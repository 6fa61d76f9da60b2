import json
import sys
from pathlib import Path

import pytest
from hypothesis import settings

from wilkshift import PrecisionCtx

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FROZEN = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())


@pytest.fixture(scope="session")
def ctx():
    return PrecisionCtx(300)


@pytest.fixture(scope="session")
def ctx100():
    return PrecisionCtx(100)


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
