"""Command-line front end.

Subcommands: orbit, ivpp, decompose, boundaries, raster, denoms, parse,
verify.  Exit codes: 0 success, 1 verification/computation failure,
2 usage error (diagnostics go to stderr).  Outputs are deterministic for
fixed inputs; IVPP_THREADS caps raster parallelism.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from contextlib import redirect_stderr, redirect_stdout
from typing import List, Optional, Tuple

from . import serialize
from .core import Indeterminate, InfiniteCoordinate, Point, RationalMap
from .decompose import (
    NoClosure,
    NonRealBoundary,
    NotACycle,
    PoleHit,
    boundaries_analytic,
    boundaries_empirical,
    decompose,
)
from .dsl import ParseDiagnostic, SemanticError, format_map, maps_equal, parse_map
from .ivpp2d import DegenerateBranch, branches, gamma_poly
from .lv3d import UnsupportedPeriod, lv_decompose_period2, lv_gamma
from .maps import BUILTIN_NAMES, get_map


class UsageError(ValueError):
    pass


def _load_map(spec: str, r=None) -> RationalMap:
    if spec in BUILTIN_NAMES:
        return get_map(spec, r=r)
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read map {spec!r}: {exc}") from None
    return parse_map(text)


def _parse_window(text: str) -> Tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("window must be x0,x1,y0,y1")
    x0, x1, y0, y1 = (float(p) for p in parts)
    if not (x0 < x1 and y0 < y1):
        raise UsageError("window must be nonempty")
    return (x0, x1, y0, y1)


def _parse_resolution(text: str) -> Tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise UsageError("resolution must be WxH")
    w, h = int(parts[0]), int(parts[1])
    if w <= 0 or h <= 0:
        raise UsageError("resolution must be positive")
    return (w, h)


def _parse_start(text: str, dim: int) -> Point:
    parts = text.split(",")
    if len(parts) != dim:
        raise UsageError(f"start needs {dim} comma-separated values")
    vals = []
    for p in parts:
        p = p.strip()
        vals.append(complex(math.inf, 0) if p in ("inf", "-inf") else complex(p))
    return Point(vals)


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pick_branch(n: int, selector: str):
    bs = branches(n)
    idx = int(selector)
    if not 1 <= idx <= len(bs):
        raise UsageError(f"period {n} has {len(bs)} branch(es); --branch must be 1..{len(bs)}")
    return bs[idx - 1]


# -- subcommands ---------------------------------------------------------------


def _cmd_orbit(args) -> int:
    m = _load_map(args.map, r=args.r)
    start = _parse_start(args.start, m.dim)
    trace = m.iterate(start, args.steps, tol=args.tol)
    doc = {
        "map": m.name or args.map,
        "steps": args.steps,
        "points": [list(p.coords) for p in trace.points],
        "closed": trace.closed,
        "minimal_period": trace.minimal_period,
    }
    _emit(serialize.dumps(doc), args.output)
    return 0


def _cmd_ivpp(args) -> int:
    if args.map == "f3d":
        if args.r is None or args.s is None:
            raise UsageError("f3d level conditions need --r and --s")
        value = lv_gamma(args.period, complex(args.r), complex(args.s))
        doc = {"map": "f3d", "period": args.period, "gamma": value}
        _emit(serialize.dumps(doc), args.output)
        return 0
    if args.map != "f2d":
        raise UsageError("period conditions are available for the built-ins f2d and f3d")
    g = gamma_poly(args.period)
    doc = {
        "map": "f2d",
        "period": args.period,
        "monic": list(g.monic),
        "scaled": list(g.scaled) if g.scaled else None,
        "scale": g.scale,
        "branches": [{"m": b.m, "rho": b.rho, "label": b.label} for b in branches(args.period)],
    }
    if args.r is not None:
        doc["gamma_at_r"] = g.eval_monic(complex(args.r))
    _emit(serialize.dumps(doc), args.output)
    return 0


def _cmd_decompose(args) -> int:
    if args.map == "f3d":
        if args.period != 2:
            raise UsageError("the 3d map is decomposed at period 2 only")
        sign = args.branch if args.branch in ("+", "-") else "+"
        d = lv_decompose_period2(float(args.r if args.r is not None else 0.0), sign)
        _emit(serialize.dumps(d.to_json_dict()), args.output)
        return 0
    if args.map != "f2d":
        raise UsageError(
            "decomposition needs a built-in branch parametrization (f2d or f3d); "
            "for 1d maps use the boundaries subcommand"
        )
    b = _pick_branch(args.period, args.branch or "1")
    d = decompose(b, method=args.method)
    _emit(serialize.dumps(d.to_json_dict()), args.output)
    return 0


def _cmd_boundaries(args) -> int:
    m = _load_map(args.map)
    if m.dim == 2:
        if m.name != "f2d":
            raise UsageError(
                "2d boundary comparison needs the f2d branch parametrization; "
                "supply one through the library API for custom maps"
            )
        b = _pick_branch(args.period, args.branch or "1")
        ana = boundaries_analytic(b)
        emp = boundaries_empirical(m, b.point, args.period)
    elif m.dim == 1:
        ana = None
        emp = boundaries_empirical(m, lambda x: (x,), args.period)
    else:
        raise UsageError("boundaries supports 1d and 2d maps")
    lines = []
    if ana is None:
        lines.append("#   empirical")
        for i, v in enumerate(emp):
            lines.append(f"{i:<3d} {v:.15g}")
    else:
        lines.append("#   analytic              empirical             |diff|")
        worst = 0.0
        for i, (u, v) in enumerate(zip(ana, emp)):
            diff = 0.0 if (math.isinf(u) and math.isinf(v)) else abs(u - v)
            worst = max(worst, diff)
            lines.append(f"{i:<3d} {u:<21.15g} {v:<21.15g} {diff:.2e}")
        lines.append(f"max |diff| = {worst:.3e}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_raster(args) -> int:
    from .raster import lv_raster, raster

    window = _parse_window(args.window)
    res = _parse_resolution(args.resolution)
    if args.map == "f3d":
        if args.period != 2:
            raise UsageError("the 3d striped raster is period 2 only")
        sign = args.branch if args.branch in ("+", "-") else "+"
        R = lv_raster(window, res, sign=sign, stripe_half_width=args.stripe)
    else:
        m = _load_map(args.map)
        if args.mode == "component":
            if m.name != "f2d":
                raise UsageError("component rasters need the f2d branches; use --mode period")
            b = _pick_branch(args.period, args.branch or "1")
            d = decompose(b, method="analytic")
            R = raster(m, window, res, n_max=args.n_max, tol=args.tol, decomp=d, branch=b)
        else:
            R = raster(m, window, res, n_max=args.n_max, tol=args.tol)
    layer = "component" if args.mode == "component" else "period"
    with open(args.output, "wb") as fh:
        fh.write(R.to_pgm_bytes(layer))
    if args.csv:
        R.to_csv(args.csv)
    return 0


def _cmd_denoms(args) -> int:
    from .denoms import denominator_zero_curves

    m = _load_map(args.map)
    window = _parse_window(args.window)
    res = _parse_resolution(args.resolution)
    zs = denominator_zero_curves(m, args.k_max, window, res)
    depth = zs.first_pole_depth
    header = f"P5\n{res[0]} {res[1]}\n255\n".encode()
    import numpy as np

    with open(args.output, "wb") as fh:
        fh.write(header + np.clip(depth, 0, 255).astype(np.uint8)[::-1, :].tobytes())
    if args.csv:
        from .denoms import cell_centers

        xs, ys = cell_centers(window, res)
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("x,y,first_pole_k\n")
            for i in range(res[1]):
                for j in range(res[0]):
                    fh.write(f"{xs[j]:.17g},{ys[i]:.17g},{int(depth[i, j])}\n")
    return 0


def _cmd_parse(args) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    m = parse_map(text)
    normalized = format_map(m)
    if not maps_equal(m, parse_map(normalized)):
        sys.stderr.write("round-trip mismatch\n")
        return 1
    _emit(normalized, args.output)
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all(printer=lambda line: sys.stdout.write(line + "\n"))
    failed = [r for r in results if not r.passed]
    sys.stdout.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return 1 if failed else 0


# -- wiring ---------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ivpp", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, with_map=True):
        if with_map:
            p.add_argument("--map", default="f2d", help="built-in name or a .rmap file")
        p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("orbit", help="iterate a map and print the trace as JSON")
    add_common(p)
    p.add_argument("--start", required=True, help="comma-separated coordinates")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--r", type=float, default=None, help="level for f2d-reduced")
    p.set_defaults(fn=_cmd_orbit)

    p = sub.add_parser("ivpp", help="period conditions and branches")
    add_common(p)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.set_defaults(fn=_cmd_ivpp)

    p = sub.add_parser("decompose", help="component decomposition as JSON")
    add_common(p)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--branch", default=None, help="branch index (2d) or +/- (3d)")
    p.add_argument("--method", choices=("analytic", "empirical"), default="analytic")
    p.add_argument("--r", type=float, default=None, help="slice level for the 3d map")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("boundaries", help="analytic vs empirical boundary table")
    add_common(p)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--branch", default=None)
    p.set_defaults(fn=_cmd_boundaries)

    p = sub.add_parser("raster", help="tiling raster as PGM (and optional CSV)")
    p.add_argument("--map", default="f2d")
    p.add_argument("--period", type=int, default=3)
    p.add_argument("--branch", default=None)
    p.add_argument("--window", required=True, help="x0,x1,y0,y1")
    p.add_argument("--res", dest="resolution", required=True, help="WxH")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--mode", choices=("component", "period"), default="component")
    p.add_argument("--stripe", type=float, default=0.25, help="half-width of 3d level stripes")
    p.add_argument("--csv", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_raster)

    p = sub.add_parser("denoms", help="first-pole-depth layers of map iterates")
    p.add_argument("--map", default="f2d")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--window", required=True)
    p.add_argument("--res", dest="resolution", required=True)
    p.add_argument("--csv", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_denoms)

    p = sub.add_parser("parse", help="parse a .rmap file and print the normalized form")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.set_defaults(fn=_cmd_verify)

    return top


USAGE_ERRORS = (
    UsageError,
    ParseDiagnostic,
    SemanticError,
    DegenerateBranch,
    UnsupportedPeriod,
    InfiniteCoordinate,
    ValueError,
)
COMPUTE_ERRORS = (NotACycle, NoClosure, NonRealBoundary, Indeterminate, PoleHit)


def run(argv: List[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except COMPUTE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except USAGE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def run_captured(argv: List[str]) -> Tuple[int, str, str]:
    """Run a CLI invocation in-process, capturing stdout/stderr."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
