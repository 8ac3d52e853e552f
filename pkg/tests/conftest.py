import math
import warnings

import pytest

from dflarray.geometry import SPEED_OF_LIGHT, LinkLayout, TargetSheet

F_C = 2.4868e9
LAMBDA = SPEED_OF_LIGHT / F_C


@pytest.fixture
def link5():
    """Five-antenna, 5 m link at 2.4868 GHz with half-wavelength spacing."""
    return LinkLayout(LAMBDA, 5.0, LAMBDA / 2, 2, 0.9)


@pytest.fixture
def ula9():
    return LinkLayout(LAMBDA, 4.0, LAMBDA / 2, 4, 0.9)


def body(y, x=2.5, theta=0.0):
    return TargetSheet(0.45, 0.9, x, y, theta)


def plain_layout(d0=5.0, da=0.06, M=2, wavelength=0.12):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return LinkLayout(wavelength, d0, da, M, 0.9)


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


__all__ = ["F_C", "LAMBDA", "body", "plain_layout", "close", "math"]


# One line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
