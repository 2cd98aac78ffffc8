"""Shared oracles for the test suite.

The Fraction-based evaluators here are independent of the library's
complex-arithmetic path: expected values in the tests are computed (or
frozen from) these, never from the code under test.
"""

from fractions import Fraction
from typing import Tuple

import pytest


def f2d_exact(x: Fraction, y: Fraction) -> Tuple[Fraction, Fraction]:
    """Exact one-step image of the 2d map at a rational point."""
    return (x * (1 - y) / (1 - x), y * (1 - x) / (1 - y))


def f3d_exact(x: Fraction, y: Fraction, z: Fraction):
    dx = 1 - y + y * z
    dy = 1 - z + z * x
    dz = 1 - x + x * y
    return (x * dx / dy, y * dy / dz, z * dz / dx)


def reduced_exact(r: Fraction, x: Fraction) -> Fraction:
    return (x - r) / (1 - x)


@pytest.fixture(scope="session")
def exact_period3_orbit():
    """The rational period-3 orbit through (2, -3/2), iterated exactly."""
    p = (Fraction(2), Fraction(-3, 2))
    orbit = [p]
    for _ in range(3):
        orbit.append(f2d_exact(*orbit[-1]))
    return orbit
