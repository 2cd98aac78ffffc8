"""Period-2 structure of the 3d Lotka-Volterra map.

The period-2 level is s = -1 with r free.  Given x and r, the remaining
coordinates are y = a/(x-1), z = a'/(x-1) where a, a' are the two roots of

    a^2 - ((x^2 - 2x + r*x - r)/x) a + r*(x-1)^2/x = 0,

so a_pm = (x^2 - 2x + r*x - r +- sqrt(D))/(2x) with the discriminant

    D = r^2 - 2r^2 x + 2r x^2 + r^2 x^2 - 2r x^3 + 4x^2 - 4x^3 + x^4.

One application sends the point at parameter x, sign s to the point at
x/(x-1) with the opposite sign: the two sheets swap, every orbit closes
in two steps.  The x-dynamics x -> x/(x-1) is identically -x/(1-x): the
restriction of the map to the level IS the reduced recurrence
``lv_recurrence``, an involution of the line independent of r.
"""

from __future__ import annotations

import cmath
import math
from typing import List, Tuple

from .core import ExtendedComplex, Indeterminate, Point
from .decompose import ComponentDecomposition
from .maps import f3d
from .mobius import Mobius


class DegenerateParameter(ValueError):
    """x in {0, 1}: the branch parametrization has a pole there."""


class UnsupportedPeriod(ValueError):
    """Only the printed level conditions (n = 2, 3, 4) are available."""


SIGNS = {"+": 1, "-": -1, "a+": 1, "a-": -1}


def lv_gamma(n: int, r: complex, s: complex) -> complex:
    """The period-n level condition of the 3d map for n = 2, 3, 4."""
    if n == 2:
        return s + 1
    if n == 3:
        return (s - r) ** 2 + (r + 1) * (s + 1)
    if n == 4:
        return (s - r) ** 3 + s * (r + 1) ** 3
    raise UnsupportedPeriod(f"no printed level condition for period {n}")


def lv_discriminant(x: float, r: float) -> float:
    return (
        r * r
        - 2 * r * r * x
        + 2 * r * x * x
        + r * r * x * x
        - 2 * r * x**3
        + 4 * x * x
        - 4 * x**3
        + x**4
    )


def lv_roots(x: float, r: float) -> Tuple[complex, complex, bool]:
    """The two quadratic roots (a_plus, a_minus) and a real-branch flag.

    The square root takes the non-negative real branch when D >= 0;
    negative discriminants give a conjugate pair (flag False).
    """
    if x in (0, 1):
        raise DegenerateParameter(f"parametrization pole at x = {x}")
    d = lv_discriminant(x, r)
    real = d >= 0
    sq = math.sqrt(d) if real else cmath.sqrt(complex(d))
    base = x * x - 2 * x + r * x - r
    a_plus = (base + sq) / (2 * x)
    a_minus = (base - sq) / (2 * x)
    return a_plus, a_minus, real


def lv_period2_param(x: float, r: float, sign: str = "+") -> Point:
    """Point (x, a/(x-1), a'/(x-1)) on the period-2 level: x*y*z = r, s = -1."""
    if sign not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    a_plus, a_minus, _ = lv_roots(x, r)
    a, b = (a_plus, a_minus) if SIGNS[sign] > 0 else (a_minus, a_plus)
    return Point([x, a / (x - 1), b / (x - 1)])


def lv_is_real_branch(x: float, r: float) -> bool:
    return lv_discriminant(x, r) >= 0


def lv_decompose_period2(r: float, sign: str = "+") -> ComponentDecomposition:
    """x-direction intervals (-inf, 0], (0, 1], (1, inf] with the sheet pairing.

    The boundaries do not depend on r.  The first two intervals swap under
    the map (one tile kind); the third is carried to itself in x while the
    y, z sheets swap (the second tile kind, two components over the same
    x-range).
    """
    if sign not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    boundaries = (0.0, 1.0, math.inf)
    sigma = _pairing_sigma(r, sign, boundaries)
    return ComponentDecomposition(
        period=2,
        branch=f"a{sign}" if sign in "+-" else sign,
        convention="right-closed",
        boundaries=boundaries,
        sigma=sigma,
        r=float(r),
        tiles=2,
        tile_pairs=((1, 2), (3, 3)),
    )


def _pairing_sigma(r: float, sign: str, boundaries) -> Tuple[int, ...]:
    """Read the interval pairing off the actual 3d map at interior samples."""
    m = f3d()
    decomp_stage = ComponentDecomposition(
        period=2,
        branch="stage",
        convention="right-closed",
        boundaries=tuple(boundaries),
        sigma=(1, 2, 3),
        r=float(r),
    )
    sigma: List[int] = []
    for x in (-1.0, 0.5, 3.0):
        p = lv_period2_param(x, r, sign)
        try:
            img = m.apply(p)
            x_img = img[0]
            if x_img.is_infinite or abs(x_img.value.imag) > 1e-9:
                raise ValueError(f"unusable x-image {x_img!r} at sample x = {x}")
            val = x_img.value.real
        except Indeterminate:
            # singular levels (e.g. r = -1) sit on the indeterminacy locus;
            # the restriction of the map to the branch still moves x by the
            # r-independent limit x -> x/(x-1)
            val = x / (x - 1.0)
        sigma.append(decomp_stage.classify(val))
    return tuple(sigma)


LV_RECURRENCE = Mobius(-1, 0, -1, 1)  # x -> -x/(1 - x)


def lv_recurrence(x) -> ExtendedComplex:
    """The reduced period-2 recurrence x -> -x/(1-x); an involution on the line."""
    return LV_RECURRENCE(x)


def lv_diagonalizer() -> Mobius:
    """A change of coordinates T with T o f o T^-1 = (w -> -w).

    T = x/(x - 2) sends the fixed points {0, 2} of the recurrence to the
    fixed points {0, inf} of the sign flip.
    """
    return Mobius(1, 0, 1, -2)


def verify_involution_intertwiner(T: Mobius, samples: int = 200, tol: float = 1e-10) -> float:
    """Max chordal error of T(f(x)) = -T(x) over sample points; raises nothing."""
    import random

    rng = random.Random(77)
    worst = 0.0
    for _ in range(samples):
        x = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        lhs = T(lv_recurrence(x))
        tx = T(x)
        rhs = ExtendedComplex(None) if tx.is_infinite else ExtendedComplex(-tx.value)
        worst = max(worst, lhs.chordal(rhs))
    return worst
