"""Tiling rasters: per-cell period class and component index over a window.

Two layers per raster:

* ``period``     raw per-cell minimal period from the grid kernel
                 (0 none, -1 the orbit left the finite chart);
* ``component``  for branch rasters, the component index of cells lying in
                 a band around the branch variety, verified by snapping the
                 cell to the variety (same x, y = rho/x) and demanding the
                 snapped point close after exactly n steps.

Cells are independent and the output is deterministic for fixed inputs;
IVPP_THREADS caps the row-parallel kernel work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import kernel
from .core import RationalMap
from .decompose import ComponentDecomposition
from .denoms import cell_centers
from .ivpp2d import IvppBranch
from .lv3d import lv_discriminant

RASTER_TOL = 1e-6  # default chordal tolerance of the raw period layer
EXACT_TOL = 1e-9  # closure tolerance for snapped on-variety points


@dataclass
class TilingRaster:
    window: Tuple[float, float, float, float]
    width: int
    height: int
    period: np.ndarray  # int16 (h, w)
    component: np.ndarray  # int16 (h, w); 0 = unclassified
    meta: dict = field(default_factory=dict)

    def cells(self) -> Tuple[np.ndarray, np.ndarray]:
        return cell_centers(self.window, (self.width, self.height))

    def to_pgm_bytes(self, layer: str = "component") -> bytes:
        """Binary PGM (P5); byte = zero-based class index + 1, 0 = unclassified."""
        grid = getattr(self, layer)
        data = np.clip(grid, 0, 255).astype(np.uint8)
        header = f"P5\n{self.width} {self.height}\n255\n".encode()
        return header + data[::-1, :].tobytes()  # top row = largest y

    def to_pgm(self, path: str, layer: str = "component") -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_pgm_bytes(layer))

    def to_csv(self, path: str) -> None:
        xs, ys = self.cells()
        with open(path, "w") as fh:
            fh.write("x,y,period,component\n")
            for i in range(self.height):
                for j in range(self.width):
                    fh.write(
                        f"{xs[j]:.17g},{ys[i]:.17g},"
                        f"{int(self.period[i, j])},{int(self.component[i, j])}\n"
                    )


def raster(
    m: RationalMap,
    window: Tuple[float, float, float, float],
    resolution: Tuple[int, int],
    n_max: int,
    tol: float = RASTER_TOL,
    decomp: Optional[ComponentDecomposition] = None,
    branch: Optional[IvppBranch] = None,
    band_cells: float = 1.5,
    threads: Optional[int] = None,
) -> TilingRaster:
    """Period raster of a 2d map, plus component classes along one branch.

    A cell joins the component layer when the local level value x*y falls
    within ``band_cells`` cell-widths of the branch level rho and the
    snapped point (x, rho/x) has minimal period exactly n (tol 1e-9).
    """
    w, h = resolution
    if w * h > 4096 * 4096:
        raise ValueError("resolution capped at 4096 x 4096")
    xs, ys = cell_centers(window, resolution)
    period = kernel.period_grid(m, xs, ys, n_max, tol, threads=threads)
    component = np.zeros((h, w), dtype=np.int16)
    meta = {
        "map": m.name or "user",
        "n_max": n_max,
        "tol": tol,
        "backend": kernel.BACKEND,
    }

    if decomp is not None and branch is not None:
        X, Y = np.meshgrid(xs, ys)
        cell = max((window[1] - window[0]) / w, (window[3] - window[2]) / h)
        band = band_cells * cell * (np.abs(X) + np.abs(Y) + 1.0)
        on_branch = np.abs(X * Y - branch.rho) <= band
        on_branch &= np.abs(X) > cell  # parametrization pole at x = 0
        idx = np.nonzero(on_branch)
        for i, j in zip(*idx):
            x = float(X[i, j])
            if _snapped_period_is(m, branch, x, branch.n):
                component[i, j] = decomp.classify(x)
        period = np.where(component > 0, np.int16(branch.n), period)
        meta.update({"period_n": branch.n, "branch": branch.label, "band_cells": band_cells})

    return TilingRaster(tuple(window), w, h, period, component, meta)


def _snapped_period_is(m: RationalMap, branch: IvppBranch, x: float, n: int) -> bool:
    from .core import Indeterminate

    try:
        p = branch.point(x)
        return m.detect_period(p, n, EXACT_TOL) == n
    except (ZeroDivisionError, Indeterminate):
        return False


def lv_raster(
    window: Tuple[float, float, float, float],
    resolution: Tuple[int, int],
    sign: str = "+",
    stripe_half_width: float = 0.25,
) -> TilingRaster:
    """Striped period-2 tiling of the 3d map over the (x, r) plane.

    Rows near integer r (the level sets drawn with r stepped by 1) are
    classified by the r-independent x-intervals; cells with a negative
    discriminant have no real point and stay unclassified.
    """
    from .lv3d import lv_decompose_period2

    w, h = resolution
    xs, rs = cell_centers(window, resolution)
    component = np.zeros((h, w), dtype=np.int16)
    period = np.zeros((h, w), dtype=np.int16)
    decomp = lv_decompose_period2(0.0, sign)
    fin = np.asarray(decomp.finite_boundaries())
    classes = (np.searchsorted(fin, xs, side="left") + 1).astype(np.int16)
    for i, r in enumerate(rs):
        r_level = round(float(r))
        if abs(r - r_level) > stripe_half_width:
            continue
        if not window[2] <= r_level <= window[3]:
            continue
        mask = (lv_discriminant(xs, float(r_level)) >= 0) & (xs != 0.0) & (xs != 1.0)
        component[i, mask] = classes[mask]
        period[i, mask] = 2
    return TilingRaster(
        tuple(window),
        w,
        h,
        period,
        component,
        {
            "map": "f3d",
            "period_n": 2,
            "branch": f"a{sign}",
            "stripe_half_width": stripe_half_width,
            "plane": "(x, r)",
        },
    )


def denom_raster(first_pole_depth: np.ndarray, window, resolution) -> TilingRaster:
    """Wrap a first-pole-depth grid as a raster (byte = depth k, 0 = none)."""
    w, h = resolution
    return TilingRaster(
        tuple(window),
        w,
        h,
        first_pole_depth.astype(np.int16),
        first_pole_depth.astype(np.int16),
        {"layer": "first-pole-depth"},
    )
