"""Backend dispatch for the grid kernels.

The compiled extension (ivpp._kernel, Cython) is preferred; the numpy
fallback (ivpp._kernel_py) is used when the extension is missing or when
IVPP_PURE_PYTHON is set in the environment.  Both export the same
``period_grid`` contract; ``load_backend`` fetches either one explicitly
(the benchmark uses that to compare them).
"""

from __future__ import annotations

import os
from typing import List, Tuple

import numpy as np

from .core import RationalMap


def load_backend(name: str | None = None):
    """Return the kernel module: 'cython', 'python', or best available."""
    if name in (None, "cython"):
        if not os.environ.get("IVPP_PURE_PYTHON"):
            try:
                from . import _kernel  # compiled extension

                return _kernel
            except ImportError:
                if name == "cython":
                    raise
        elif name == "cython":
            raise ImportError("IVPP_PURE_PYTHON is set")
    if name not in (None, "cython", "python"):
        raise ValueError(f"unknown backend {name!r}")
    from . import _kernel_py

    return _kernel_py


_impl = load_backend()
BACKEND = _impl.BACKEND_NAME


def pack_map(m: RationalMap) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flatten a 2d map with real coefficients into kernel term tables."""
    if m.dim != 2:
        raise ValueError("grid kernels support 2d maps")
    coefs: List[float] = []
    exps: List[Tuple[int, int]] = []
    offs = [0]
    polys = [p for pair in m.components for p in pair]  # num_x, den_x, num_y, den_y
    for p in polys:
        for e, c in sorted(p.terms.items()):
            cc = complex(c)
            if cc.imag != 0:
                raise ValueError("grid kernels need real coefficients")
            coefs.append(cc.real)
            exps.append(e)
        offs.append(len(coefs))
    return (
        np.asarray(coefs, dtype=np.float64),
        np.asarray(exps, dtype=np.int32).reshape(len(coefs), 2),
        np.asarray(offs, dtype=np.int32),
    )


def period_grid(
    m: RationalMap,
    xs: np.ndarray,
    ys: np.ndarray,
    n_max: int,
    tol: float,
    threads: int | None = None,
    backend=None,
) -> np.ndarray:
    """Per-cell minimal period (int16): 0 none, -1 left the finite chart.

    Rows are split across ``threads`` workers (IVPP_THREADS by default);
    cells are independent and writes disjoint, so the result does not
    depend on the execution order.
    """
    impl = backend or _impl
    coefs, exps, offs = pack_map(m)
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    out = np.empty((ys.shape[0], xs.shape[0]), dtype=np.int16)
    if threads is None:
        threads = int(os.environ.get("IVPP_THREADS", "1"))
    threads = max(1, min(threads, ys.shape[0]))
    if threads == 1:
        impl.period_grid(coefs, exps, offs, xs, ys, n_max, tol, out, 0, ys.shape[0])
        return out
    from concurrent.futures import ThreadPoolExecutor

    edges = np.linspace(0, ys.shape[0], threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(
                impl.period_grid, coefs, exps, offs, xs, ys, n_max, tol, out, int(a), int(b)
            )
            for a, b in zip(edges[:-1], edges[1:])
            if b > a
        ]
        for f in futures:
            f.result()
    return out
