import hypothesis
import numpy as np
import pytest

from fwmblockade import HilbertSpace

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

TEST_DIMS = (4, 3, 3)

_acceptance_lines = []


@pytest.fixture
def test_space():
    return HilbertSpace(TEST_DIMS)


def record_acceptance(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: s[7:]):
            terminalreporter.write_line(line)
