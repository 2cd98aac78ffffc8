"""Period-n conditions and branch parametrizations for the built-in 2d map.

On the invariant level r = x*y, the period-n locus is cut out by
r + tan^2(pi*m/n) = 0 taken over m coprime to n with m < n/2; each
admissible m is one branch, with level value rho = -tan^2(pi*m/n) and
parametrization x -> (x, rho/x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from .core import InfiniteCoordinate, Point


class DegenerateBranch(ValueError):
    """m/n = 1/2 (tan pole): the period-2 level sits at r = infinity."""


def _check_n(n: int) -> None:
    if n == 2:
        raise DegenerateBranch("period 2 has no IVPP: the level condition forces r = infinity")
    if n < 3:
        raise ValueError(f"period must be >= 3, got {n}")


def gamma_closed(n: int, m: int, r: complex) -> complex:
    """The period-n level condition r + tan^2(pi*m/n), zero on the branch."""
    _check_n(n)
    if not 1 <= m <= n - 1:
        raise ValueError(f"m must be in 1..{n - 1}, got {m}")
    if 2 * m == n:
        raise DegenerateBranch(f"m/n = 1/2 is a tan pole (period-2 exclusion), got m={m}, n={n}")
    return r + math.tan(math.pi * m / n) ** 2


def admissible_m(n: int) -> List[int]:
    """Branch indices: m coprime to n, 1 <= m < n/2."""
    _check_n(n)
    return [m for m in range(1, (n + 1) // 2) if gcd(m, n) == 1]


@dataclass(frozen=True)
class IvppBranch:
    """One branch of the period-n variety of the 2d map."""

    n: int
    m: int
    rho: float  # level value: x*y = rho on the branch

    @property
    def label(self) -> str:
        return f"m={self.m}"

    def y_of(self, x: complex) -> complex:
        if x == 0:
            raise ZeroDivisionError("parametrization pole at x = 0")
        return self.rho / x

    def point(self, x: complex) -> Point:
        return Point([x, self.y_of(x)])

    def primitive_root(self) -> complex:
        """Scale factor of the reduced map on this branch: exp(2*pi*i*m/n)."""
        import cmath

        return cmath.exp(2j * math.pi * self.m / self.n)


def branches(n: int) -> List[IvppBranch]:
    """All branches of period n, ordered by m; list length phi(n)/2."""
    return [IvppBranch(n, m, -math.tan(math.pi * m / n) ** 2) for m in admissible_m(n)]


@dataclass(frozen=True)
class GammaPolynomial:
    """Product of (r + tan^2(pi*m/n)) over the admissible m, in two forms."""

    n: int
    monic: Tuple[float, ...]  # ascending-degree coefficients, leading 1.0
    scaled: Optional[Tuple[int, ...]]  # integer-scaled form, when recognizable
    scale: Optional[int]

    @property
    def degree(self) -> int:
        return len(self.monic) - 1

    def eval_monic(self, r: complex) -> complex:
        acc = 0j
        for c in reversed(self.monic):
            acc = acc * r + c
        return acc


def gamma_poly(n: int) -> GammaPolynomial:
    """Monic period-n polynomial in r, plus its integer-scaled form."""
    roots = [math.tan(math.pi * m / n) ** 2 for m in admissible_m(n)]
    coeffs = [1.0]
    for t in roots:  # multiply running polynomial by (r + t)
        nxt = [0.0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] += c * t
        coeffs = nxt
    monic = tuple(coeffs)

    fracs = []
    ok = True
    for c in monic:
        f = Fraction(c).limit_denominator(10**7)
        if abs(float(f) - c) > 1e-9 * max(1.0, abs(c)):
            ok = False
            break
        fracs.append(f)
    if ok:
        scale = 1
        for f in fracs:
            scale = scale * f.denominator // gcd(scale, f.denominator)
        scaled = tuple(int(f * scale) for f in fracs)
        return GammaPolynomial(n, monic, scaled, scale)
    return GammaPolynomial(n, monic, None, None)


def on_ivpp(n: int, p: Point, tol: float = 1e-9) -> Optional[int]:
    """Index into branches(n) of the branch with x*y = rho within tol, else None."""
    if p.dim != 2:
        raise ValueError("on_ivpp needs a 2d point")
    if not p.is_finite:
        raise InfiniteCoordinate("on_ivpp needs finite coordinates")
    x, y = p.values()
    r = x * y
    for i, b in enumerate(branches(n)):
        if abs(r - b.rho) < tol:
            return i
    return None
