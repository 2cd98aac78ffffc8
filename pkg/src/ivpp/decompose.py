"""Component decomposition of a period-n variety along the x direction.

Boundaries come from two routes that must agree: the closed-form values
``boundary_c`` (analytic), and a scan/bisection search for poles of the
x-coordinates of the n-step flow (empirical).  Intervals between
consecutive boundaries are half-open; the map permutes them, and the
permutation is read off by pushing one interior sample of each interval
through the map once.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .core import Indeterminate, OrbitTrace, Point, RationalMap
from .ivpp2d import IvppBranch
from .maps import f2d
from .mobius import boundary_cs

INF_F = math.inf


class PoleHit(ArithmeticError):
    """The flow ran into a pole; carries the step index."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class NonRealBoundary(ValueError):
    """A closed-form boundary came out non-real; interval decomposition needs a real order."""


class NoClosure(ValueError):
    """Sampled points do not close after n steps: wrong branch or period."""


class NotACycle(ValueError):
    """The interval permutation is not a single n-cycle: wrong boundary set."""


@dataclass(frozen=True)
class ComponentDecomposition:
    """Ordered interval decomposition plus the induced component permutation.

    ``boundaries`` lists the cut points ascending with infinity last (the
    projective point at infinity is always a cut).  ``sigma`` is 1-based:
    component i maps into component sigma[i-1].  ``convention`` records
    which end of each interval is closed.
    """

    period: int
    branch: str
    convention: str  # "left-closed" [a, b) or "right-closed" (a, b]
    boundaries: Tuple[float, ...]
    sigma: Tuple[int, ...]
    rho: Optional[float] = None  # 2d level value x*y
    r: Optional[float] = None  # 3d slice parameter
    tiles: int = 1
    tile_pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        fin = self.finite_boundaries()
        if list(fin) != sorted(fin):
            raise ValueError("boundaries must be ascending")
        if self.boundaries[-1] != INF_F:
            raise ValueError("the boundary at infinity must be present (last)")
        if self.convention not in ("left-closed", "right-closed"):
            raise ValueError(f"unknown convention {self.convention!r}")

    def finite_boundaries(self) -> Tuple[float, ...]:
        return tuple(b for b in self.boundaries if math.isfinite(b))

    @property
    def n_components(self) -> int:
        return len(self.boundaries)

    def intervals(self) -> List[Tuple[float, float]]:
        """(lo, hi) pairs covering the extended line; first lo and last hi are inf."""
        fin = self.finite_boundaries()
        ends = [-INF_F, *fin, INF_F]
        return list(zip(ends[:-1], ends[1:]))

    def classify(self, x: float, tol: float = 1e-9) -> int:
        """1-based component index; infinity lands in the last component.

        x within tol of a cut point counts as sitting on the cut, so the
        half-open convention decides its side; this keeps the printed
        boundary memberships stable against the ~1e-16 noise the closed
        forms carry.
        """
        if math.isinf(x):
            return self.n_components
        fin = self.finite_boundaries()
        for b in fin:
            if abs(x - b) <= tol * max(1.0, abs(b)):
                x = b
                break
        if self.convention == "left-closed":
            return bisect_right(fin, x) + 1
        return bisect_left(fin, x) + 1

    def interior_samples(self) -> List[float]:
        """One interior x per component, deterministic and pole-avoiding."""
        out = []
        for lo, hi in self.intervals():
            if math.isinf(lo) and math.isinf(hi):
                out.append(0.6180339887498949)
            elif math.isinf(lo):
                out.append(hi - 1.6180339887498949)
            elif math.isinf(hi):
                out.append(lo + 1.6180339887498949)
            else:
                out.append(lo + (hi - lo) * 0.6180339887498949)
        return out

    def to_json_dict(self) -> dict:
        fin = self.finite_boundaries()
        doc = {
            "period": self.period,
            "branch": self.branch,
            "convention": self.convention,
            "boundaries": [-INF_F, *fin],  # interval starting points, ascending
            "sigma": list(self.sigma),
        }
        if self.rho is not None:
            doc["rho"] = self.rho
        if self.r is not None:
            doc["r"] = self.r
        if self.tiles != 1:
            doc["tiles"] = self.tiles
            doc["tile_pairs"] = [list(p) for p in self.tile_pairs]
        return doc


def classify(decomp: ComponentDecomposition, x: float, tol: float = 1e-9) -> int:
    return decomp.classify(x, tol)


# -- flows on a 2d branch -----------------------------------------------------


def trace_flow(branch: IvppBranch, x0: float, n: int | None = None) -> OrbitTrace:
    """n-step orbit of the parametrized point (x0, rho/x0); closes to start.

    Raises PoleHit (with the step index) when the flow leaves the finite
    chart, which happens exactly when x0 is a component boundary.
    """
    steps = branch.n if n is None else n
    m = f2d()
    try:
        p = branch.point(x0)
    except ZeroDivisionError:
        raise PoleHit("parametrization pole at x = 0", 0) from None
    trace = m.iterate(p, steps)
    for i, q in enumerate(trace.points):
        if not q.is_finite:
            raise PoleHit(f"flow hit a pole at step {i}", i)
    return trace


# -- analytic boundaries ------------------------------------------------------


def _dedup_sorted(values: List[float], tol: float = 1e-9) -> List[float]:
    values = sorted(values)
    out: List[float] = []
    for v in values:
        if not out or abs(v - out[-1]) > tol:
            out.append(v)
    return out


def boundaries_analytic(branch: IvppBranch, tol_imag: float = 1e-9) -> List[float]:
    """Deduplicated real boundary values from the closed form, infinity last."""
    out: List[float] = []
    for c in boundary_cs(branch.n, k=branch.m):
        if c.is_infinite:
            continue
        if abs(c.value.imag) > tol_imag:
            raise NonRealBoundary(f"non-real boundary {c.value!r} for {branch}")
        out.append(c.value.real)
    return _dedup_sorted(out) + [INF_F]


# -- empirical boundaries -----------------------------------------------------

_HUGE = 1e8


def _coerce_coords(vals) -> Tuple[complex, ...]:
    if isinstance(vals, Point):
        return tuple(c.value if c.is_finite else complex(math.inf, 0) for c in vals.coords)
    return tuple(complex(v) for v in vals)


def _flow_x_coords(
    m: RationalMap, param: Callable[[float], Sequence[complex]], x: float, n: int
) -> List[float]:
    """Real x-coordinates of the n-step flow; inf on blowups, nan on dead orbits."""
    try:
        coords = _coerce_coords(param(x))
    except ZeroDivisionError:
        coords = None
    out = []
    for _ in range(n):
        if coords is None:
            out.append(math.nan)
            continue
        out.append(coords[0].real if not _bad(coords[0]) else math.inf)
        nxt = m.eval_raw(coords)
        if any(_nan(c) for c in nxt):
            coords = None
        else:
            coords = nxt
    return out


def _bad(c: complex) -> bool:
    return math.isinf(c.real) or math.isinf(c.imag)


def _nan(c: complex) -> bool:
    return math.isnan(c.real) or math.isnan(c.imag)


def _signature(xs: List[float]) -> Tuple[int, ...]:
    sig = []
    for v in xs:
        if math.isnan(v):
            sig.append(9)
        elif math.isinf(v):
            sig.append(5)
        else:
            sig.append(1 if v > 0 else (-1 if v < 0 else 0))
    return tuple(sig)


def boundaries_empirical(
    m: RationalMap,
    param: Callable[[float], Sequence[complex]],
    n: int,
    window: Tuple[float, float] = (-6.0, 6.0),
    samples: int = 4800,
    tol: float = 1e-9,
) -> List[float]:
    """Boundary estimates from sign changes of the flow's x-coordinates.

    Scans the window, bisects every discontinuity of the orbit signature
    (the sign pattern of the x-coordinate of all n iterates), and keeps
    the candidates where some iterate actually blows up (a pole), not the
    plain zero crossings.  The point at infinity is probed through the
    u = 1/x chart: it is a boundary when the signatures on the two sides
    of u = 0 disagree, which for the parameter-is-x flows used here they
    always do.
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("empty window")

    def sig_at(x: float) -> Tuple[int, ...]:
        return _signature(_flow_x_coords(m, param, x, n))

    # closure pre-check on a few generic interior points
    probes = [lo + (hi - lo) * t for t in (0.137, 0.411, 0.739)]
    closed_any = False
    for x in probes:
        try:
            vals = param(x)
            p = vals if isinstance(vals, Point) else Point(list(vals))
            if m.iterate(p, n).closed:
                closed_any = True
                break
        except (Indeterminate, ZeroDivisionError, ValueError):
            continue
    if not closed_any:
        raise NoClosure(f"sampled points do not return after {n} steps")

    xs = [lo + (hi - lo) * i / samples for i in range(samples + 1)]
    sigs = [sig_at(x) for x in xs]
    found: List[float] = []
    for i in range(samples):
        if sigs[i] == sigs[i + 1]:
            continue
        a, b = xs[i], xs[i + 1]
        sa = sigs[i]
        while b - a > tol * 0.01:
            mid = 0.5 * (a + b)
            if sig_at(mid) == sa:
                a = mid
            else:
                b = mid
        x_star = 0.5 * (a + b)
        # keep only pole crossings: near a boundary some iterate is huge
        flow = _flow_x_coords(m, param, x_star, n)
        if any(math.isinf(v) or (not math.isnan(v) and abs(v) > _HUGE) for v in flow):
            found.append(x_star)
    out = _dedup_sorted(found, tol=10 * tol)
    if sig_at(1.0 / 1e-9) != sig_at(-1.0 / 1e-9):  # the u = 1/x chart around u = 0
        out.append(INF_F)
    return out


# -- decomposition ------------------------------------------------------------


def decompose(
    branch: IvppBranch,
    method: str = "analytic",
    window: Tuple[float, float] = (-6.0, 6.0),
) -> ComponentDecomposition:
    """Intervals between boundaries plus the cycle permutation of the 2d map.

    Convention is left-closed [a, b); the unbounded piece is (-inf, c) and
    the point at infinity belongs to the last piece [c_last, inf).
    """
    if method == "analytic":
        bounds = boundaries_analytic(branch)
    elif method == "empirical":
        bounds = boundaries_empirical(f2d(), branch.point, branch.n, window=window)
    else:
        raise ValueError(f"unknown method {method!r}")

    partial = ComponentDecomposition(
        period=branch.n,
        branch=branch.label,
        convention="left-closed",
        boundaries=tuple(bounds),
        sigma=tuple(range(1, len(bounds) + 1)),  # placeholder until computed
        rho=branch.rho,
    )
    sigma = _cycle_from_samples(partial, branch)
    decomp = ComponentDecomposition(
        period=branch.n,
        branch=branch.label,
        convention="left-closed",
        boundaries=tuple(bounds),
        sigma=sigma,
        rho=branch.rho,
    )
    _require_single_cycle(decomp)
    return decomp


def _cycle_from_samples(decomp: ComponentDecomposition, branch: IvppBranch) -> Tuple[int, ...]:
    m = f2d()
    sigma: List[int] = []
    for i, x in enumerate(decomp.interior_samples()):
        image_x = None
        for candidate in _sample_candidates(decomp.intervals()[i], x):
            try:
                img = m.apply(branch.point(candidate))
            except (Indeterminate, ZeroDivisionError):
                continue
            cx = img[0]
            if cx.is_infinite or abs(cx.value.imag) > 1e-9:
                continue
            image_x = cx.value.real
            break
        if image_x is None:
            raise NotACycle(f"no classifiable image for component {i + 1}")
        sigma.append(decomp.classify(image_x))
    return tuple(sigma)


def _sample_candidates(interval: Tuple[float, float], first: float) -> List[float]:
    lo, hi = interval
    out = [first]
    for t in (0.5, 0.381966, 0.25, 0.75):
        if math.isinf(lo) and math.isinf(hi):
            out.append(t)
        elif math.isinf(lo):
            out.append(hi - 1 - t)
        elif math.isinf(hi):
            out.append(lo + 1 + t)
        else:
            out.append(lo + (hi - lo) * t)
    return [x for x in out if x != 0]


def _require_single_cycle(decomp: ComponentDecomposition) -> None:
    n = decomp.n_components
    seen = set()
    cur = 1
    for _ in range(n):
        cur = decomp.sigma[cur - 1]
        if cur in seen:
            raise NotACycle(f"sigma {decomp.sigma} is not a single {n}-cycle")
        seen.add(cur)
    if cur != 1 or len(seen) != n:
        raise NotACycle(f"sigma {decomp.sigma} is not a single {n}-cycle")
