"""Invariant-level reduction of the 2d map to a Mobius action.

On the level x*y = r the map acts on x alone as x -> (x - r)/(1 - x),
the fractional-linear action of [[1, -r], [-1, 1]].  Its eigenvalues are
1 +- sqrt(r); the eigenvalue ratio s = (1 + sqrt(r))/(1 - sqrt(r)) turns
the action into the pure scale z -> s*z in the coordinate
z = sqrt(r)*(1 - x)/(1 + x), so period n means s^n = 1 and the component
boundaries come out in closed form (``boundary_c`` in x, ``boundary_d``
in z).

Square roots use the principal branch, so sqrt of a negative real is
positive imaginary; all level values of real branches are negative real,
which fixes the signs of the z-space boundary values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Tuple

from .core import INF, ExtendedComplex


class ZeroInvariant(ValueError):
    """The closed-form power and the x<->z change need a nonzero level r."""


@dataclass(frozen=True)
class Mobius:
    """Fractional-linear map (a*x + b)/(c*x + d), nonsingular."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if abs(self.det) <= 1e-12:
            raise ValueError("matrix is singular (|det| <= 1e-12)")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, x) -> ExtendedComplex:
        x = x if isinstance(x, ExtendedComplex) else ExtendedComplex(x)
        if x.is_infinite:
            if self.c == 0:
                return INF
            return ExtendedComplex(self.a / self.c)
        z = x.value
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den == 0:
            return INF  # num != 0 here: a common root would force det = 0
        return ExtendedComplex(num / den)

    def compose(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def matrix(self) -> Tuple[Tuple[complex, complex], Tuple[complex, complex]]:
        return ((self.a, self.b), (self.c, self.d))

    def projectively_close(self, other: "Mobius", tol: float = 1e-9, samples: int = 20) -> bool:
        """Same action on the projective line, up to an overall scalar."""
        import random

        rng = random.Random(1234)
        for _ in range(samples):
            x = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if self(x).chordal(other(x)) > tol:
                return False
        return True


def level_matrix(r: complex) -> Mobius:
    """The reduced-map matrix [[1, -r], [-1, 1]] on the level x*y = r."""
    return Mobius(1, -r, -1, 1)


def reduced_apply(r: complex, x) -> ExtendedComplex:
    """x -> (x - r)/(1 - x) projectively: 1 -> inf, inf -> -1."""
    return level_matrix(r)(x)


@dataclass(frozen=True)
class EigenData:
    """Eigen-structure of the level matrix: lambda_pm = 1 +- sqrt(r)."""

    sqrt_r: complex
    lam_plus: complex
    lam_minus: complex
    s: ExtendedComplex  # lam_plus / lam_minus; infinity exactly at r = 1


def eigen(r: complex) -> EigenData:
    sr = cmath.sqrt(r)
    lp, lm = 1 + sr, 1 - sr
    s = INF if lm == 0 else ExtendedComplex(lp / lm)
    return EigenData(sr, lp, lm, s)


def power_matrix(r: complex, m: int) -> Mobius:
    """Closed form of the m-th matrix power, up to an overall scalar.

    Entries: [[l+^m + l-^m, -sqrt(r)(l+^m - l-^m)],
              [-(l+^m - l-^m)/sqrt(r), l+^m + l-^m]]; equals 2*M at m = 1.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if r == 0:
        raise ZeroInvariant("closed-form power needs r != 0")
    e = eigen(r)
    p, q = e.lam_plus**m, e.lam_minus**m
    return Mobius(p + q, -e.sqrt_r * (p - q), -(p - q) / e.sqrt_r, p + q)


def x_to_z_map(r: complex) -> Mobius:
    if r == 0:
        raise ZeroInvariant("the x<->z change needs r != 0")
    sr = cmath.sqrt(r)
    return Mobius(-sr, sr, 1, 1)


def x_to_z(r: complex, x) -> ExtendedComplex:
    """z = sqrt(r)*(1 - x)/(1 + x); inf -> -sqrt(r), -1 -> inf."""
    return x_to_z_map(r)(x)


def z_to_x(r: complex, z) -> ExtendedComplex:
    return x_to_z_map(r).inverse()(z)


def scale_coordinate_map(r: complex) -> Mobius:
    """Eigencoordinate w = (sqrt(r) - x)/(sqrt(r) + x) of the level action.

    This is the coordinate built from the eigenvector rows, in which one
    application is exactly w -> s*w.  The boundary coordinate ``x_to_z``
    is a different Mobius image of the line: it reproduces the tabulated
    z-values of the boundaries but is not itself the scaling chart.
    """
    if r == 0:
        raise ZeroInvariant("the eigencoordinate needs r != 0")
    sr = cmath.sqrt(r)
    return Mobius(-1, sr, 1, sr)


def scale_coordinate(r: complex, x) -> ExtendedComplex:
    return scale_coordinate_map(r)(x)


def _primitive_root_power(n: int, k: int, m: int) -> Tuple[complex, bool]:
    """s_n^m for s_n = exp(2*pi*i*k/n), with an exact unity flag.

    Quarter turns are returned exactly (i, -1, -i are representable), so
    the boundary values they generate come out clean instead of carrying
    the ~1e-16 noise of cos/sin at multiples of pi/2.
    """
    j = (k * m) % n
    if j == 0:
        return (1 + 0j, True)
    if 4 * j == n:
        return (1j, False)
    if 2 * j == n:
        return (-1 + 0j, False)
    if 4 * j == 3 * n:
        return (-1j, False)
    return (cmath.exp(2j * math.pi * j / n), False)


def boundary_c(n: int, m: int, k: int = 1) -> ExtendedComplex:
    """x-space component boundary (1-s)(1+s^m)/((1+s)(1-s^m)), s = exp(2*pi*i*k/n).

    m = 0 and m = n give the boundary at infinity.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0 <= m <= n:
        raise ValueError(f"m must be in 0..{n}")
    if gcd(k, n) != 1:
        raise ValueError(f"k = {k} is not a primitive root exponent mod n = {n}")
    s, _ = _primitive_root_power(n, k, 1)
    sm, sm_is_one = _primitive_root_power(n, k, m)
    if sm_is_one:
        return INF
    return ExtendedComplex((1 - s) * (1 + sm) / ((1 + s) * (1 - sm)))


def boundary_cs(n: int, k: int = 1) -> List[ExtendedComplex]:
    return [boundary_c(n, m, k) for m in range(n + 1)]


def boundary_d(n: int, r: complex, m: int) -> ExtendedComplex:
    """z-space boundary value for the m-th iterate on the level r.

    -sqrt(r) * (sqrt(r)(l+^m + l-^m) + (l+^m - l-^m))
             / (sqrt(r)(l+^m + l-^m) - (l+^m - l-^m))
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if r == 0:
        raise ZeroInvariant("the z-space boundary needs r != 0")
    e = eigen(r)
    p, q = e.lam_plus**m, e.lam_minus**m
    num = e.sqrt_r * (p + q) + (p - q)
    den = e.sqrt_r * (p + q) - (p - q)
    scale = abs(e.sqrt_r * (p + q)) + abs(p - q)
    if abs(den) <= 1e-9 * max(1.0, scale):
        return INF
    return ExtendedComplex(-e.sqrt_r * num / den)


def boundary_ds(n: int, r: complex) -> List[ExtendedComplex]:
    return [boundary_d(n, r, m) for m in range(n + 1)]


@dataclass(frozen=True)
class ExclusionReport:
    """Numerical certificate that s(r) = -1 has no finite solution.

    s(r) + 1 = 2/(1 - sqrt(r)) exactly, so |s + 1| stays positive on every
    bounded region and decays only like 2/sqrt(|r|).
    """

    min_abs: Dict[float, float]  # radius R -> min |s(r) + 1| over |r| <= R
    attained_r: Dict[float, complex]
    identity_max_dev: float  # max | |s+1| - 2/|1 - sqrt(r)| | over the grid

    @property
    def all_positive(self) -> bool:
        return all(v > 0 for v in self.min_abs.values())


def period2_exclusion(radii: Tuple[float, ...] = (10.0, 100.0, 1000.0)) -> ExclusionReport:
    """Grid-minimize |s(r) + 1| over |r| <= R for each radius R."""
    min_abs: Dict[float, float] = {}
    attained: Dict[float, complex] = {}
    dev = 0.0
    for R in radii:
        best = math.inf
        best_r = 0j
        n_rad, n_ang = 60, 96
        for i in range(1, n_rad + 1):
            rad = R * (i / n_rad) ** 2  # denser near the origin
            for j in range(n_ang):
                ang = 2 * math.pi * j / n_ang
                r = cmath.rect(rad, ang)
                sr = cmath.sqrt(r)
                if sr == 1:
                    continue
                val = abs((1 + sr) / (1 - sr) + 1)
                dev = max(dev, abs(val - 2 / abs(1 - sr)))
                if val < best:
                    best, best_r = val, r
        min_abs[R] = best
        attained[R] = best_r
    return ExclusionReport(min_abs, attained, dev)
