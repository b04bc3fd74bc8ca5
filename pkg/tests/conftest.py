import os
from pathlib import Path

import pytest
from hypothesis import settings

from omdist.constraints import ConstraintSet, closer

settings.register_profile("default", deadline=None, max_examples=200)
settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def scales():
    return ConstraintSet.of(
        closer("w", "x", "x", "v"),
        closer("x", "y", "y", "z"),
        closer("v", "z", "w", "y"),
    )


@pytest.fixture
def clash():
    return ConstraintSet.of(
        closer("v", "w", "z", "y"),
        closer("w", "x", "z", "y"),
        closer("x", "y", "z", "y"),
        closer("z", "y", "v", "z"),
    )


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
