"""Zero sets of the denominators of map iterates.

Component boundaries of a period-n variety sit on the intersection of the
variety with the locus where some iterate hits a pole; the k-th layer here
marks, per grid cell, a sign change of a component denominator evaluated
along the orbit at depth k (the orbit's first pole).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import RationalMap
from .poly import Polynomial


@dataclass(frozen=True)
class DenominatorCurve:
    """One implicit curve den_j(F^(k-1)(p)) = 0, sampled on the grid."""

    depth: int  # k: the application at which the pole occurs
    component: int  # j: which component's denominator
    values: np.ndarray  # signed samples (nan where the orbit died earlier)
    crossing: np.ndarray  # bool: sign change toward the right/down neighbor


@dataclass(frozen=True)
class DenominatorZeroSet:
    k_max: int
    window: Tuple[float, float, float, float]
    resolution: Tuple[int, int]
    denominators: Tuple[Polynomial, ...]  # the map's own (k = 1) denominators
    curves: Tuple[DenominatorCurve, ...]
    first_pole_depth: np.ndarray  # int16 per cell: 0 = none within k_max

    def layer(self, k: int) -> np.ndarray:
        mask = np.zeros(self.first_pole_depth.shape, dtype=bool)
        for c in self.curves:
            if c.depth == k:
                mask |= c.crossing
        return mask


def cell_centers(window, resolution) -> Tuple[np.ndarray, np.ndarray]:
    x0, x1, y0, y1 = window
    w, h = resolution
    dx, dy = (x1 - x0) / w, (y1 - y0) / h
    xs = x0 + dx * (np.arange(w) + 0.5)
    ys = y0 + dy * (np.arange(h) + 0.5)
    return xs, ys


def denominator_zero_curves(
    m: RationalMap,
    k_max: int,
    window: Optional[Tuple[float, float, float, float]] = None,
    resolution: Optional[Tuple[int, int]] = None,
) -> DenominatorZeroSet:
    """Numeric pole-depth layers for a 2d map (k_max <= 6: degree growth guard).

    Without a window only the exact k = 1 denominators are reported, which
    works for any dimension.
    """
    if not 1 <= k_max <= 6:
        raise ValueError("k_max must be 1..6")
    dens = tuple(den for _, den in m.components)
    if window is None or resolution is None:
        return DenominatorZeroSet(
            k_max, (0, 0, 0, 0), (0, 0), dens, (), np.zeros((0, 0), dtype=np.int16)
        )
    if m.dim != 2:
        raise ValueError("the window scan supports 2d maps; use the exact k=1 list instead")

    xs, ys = cell_centers(window, resolution)
    X, Y = np.meshgrid(xs, ys)
    cur = [X.astype(np.float64), Y.astype(np.float64)]
    alive = np.ones(X.shape, dtype=bool)
    first_pole = np.zeros(X.shape, dtype=np.int16)
    curves: List[DenominatorCurve] = []
    for k in range(1, k_max + 1):
        step_cross = np.zeros(X.shape, dtype=bool)
        den_vals = []
        for j, (_, den) in enumerate(m.components):
            with np.errstate(all="ignore"):
                D = den.eval_grid(cur)
            D = np.where(alive, D, np.nan)
            cross = np.zeros(X.shape, dtype=bool)
            s = np.sign(D)
            cross[:, :-1] |= (s[:, :-1] * s[:, 1:]) < 0
            cross[:-1, :] |= (s[:-1, :] * s[1:, :]) < 0
            cross &= alive
            curves.append(DenominatorCurve(k, j, D, cross))
            step_cross |= cross
            den_vals.append(D)
        newly = step_cross & (first_pole == 0)
        first_pole[newly] = k
        with np.errstate(all="ignore"):
            nxt = []
            for j, (num, den) in enumerate(m.components):
                nxt.append(num.eval_grid(cur) / den_vals[j])
            bad = np.zeros(X.shape, dtype=bool)
            for arr in nxt:
                bad |= ~np.isfinite(arr)
        alive &= ~bad
        cur = [np.where(alive, arr, np.nan) for arr in nxt]
    return DenominatorZeroSet(k_max, tuple(window), tuple(resolution), dens, tuple(curves), first_pole)


