import os
import subprocess
import sys

import numpy as np
import pytest

import ivpp.kernel as kernel
from ivpp.core import chordal
from ivpp.dsl import parse_map
from ivpp.maps import f2d, f2d_reduced


def test_a_backend_is_selected():
    assert kernel.BACKEND in ("cython", "python")


def test_both_backends_load_explicitly():
    py = kernel.load_backend("python")
    assert py.BACKEND_NAME == "python"
    try:
        cy = kernel.load_backend("cython")
    except ImportError:
        pytest.skip("extension not built")
    assert cy.BACKEND_NAME == "cython"


def test_pure_python_env_override():
    code = (
        "import ivpp.kernel as k; print(k.BACKEND)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={**os.environ, "IVPP_PURE_PYTHON": "1"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_backends_agree_on_f2d():
    try:
        cy = kernel.load_backend("cython")
    except ImportError:
        pytest.skip("extension not built")
    py = kernel.load_backend("python")
    xs = np.linspace(-4, 4, 301)
    ys = np.linspace(-4, 4, 301)
    g1 = kernel.period_grid(f2d(), xs, ys, 8, 1e-6, backend=cy)
    g2 = kernel.period_grid(f2d(), xs, ys, 8, 1e-6, backend=py)
    assert np.array_equal(g1, g2)


def test_backends_agree_on_a_dsl_map_with_powers():
    try:
        cy = kernel.load_backend("cython")
    except ImportError:
        pytest.skip("extension not built")
    py = kernel.load_backend("python")
    m = parse_map("dim 2; x' = (x^2 - y)/(1 - x); y' = (y^2 + x)/(1 + y);")
    xs = np.linspace(-2, 2, 201)
    ys = np.linspace(-2, 2, 201)
    g1 = kernel.period_grid(m, xs, ys, 6, 1e-6, backend=cy)
    g2 = kernel.period_grid(m, xs, ys, 6, 1e-6, backend=py)
    # power evaluation may differ in the last ulp between backends
    assert (g1 == g2).mean() > 0.999


def test_kernel_finds_the_fixed_line():
    xs = np.linspace(-2, 2, 41)
    g = kernel.period_grid(f2d(), xs, xs, 4, 1e-9)
    diag = np.diagonal(g)
    on_indeterminacy = np.isclose(xs, 1.0)  # (1, 1) is a 0/0 point
    assert (diag[~on_indeterminacy] == 1).all()  # x = y is fixed
    assert (diag[on_indeterminacy] == -1).all()


def test_kernel_marks_pole_transits_undefined():
    xs = np.asarray([1.0])  # x = 1 is a pole of the first component
    ys = np.asarray([2.0])
    g = kernel.period_grid(f2d(), xs, ys, 4, 1e-9)
    assert g[0, 0] == -1


def test_kernel_thread_split_matches_serial():
    xs = np.linspace(-3, 3, 240)
    ys = np.linspace(-3, 3, 240)
    g1 = kernel.period_grid(f2d(), xs, ys, 6, 1e-6, threads=1)
    g4 = kernel.period_grid(f2d(), xs, ys, 6, 1e-6, threads=4)
    assert np.array_equal(g1, g4)


def test_thread_count_from_the_environment(monkeypatch):
    monkeypatch.setenv("IVPP_THREADS", "3")
    xs = np.linspace(-2, 2, 60)
    g_env = kernel.period_grid(f2d(), xs, xs, 4, 1e-6)
    monkeypatch.delenv("IVPP_THREADS")
    g_serial = kernel.period_grid(f2d(), xs, xs, 4, 1e-6)
    assert np.array_equal(g_env, g_serial)


def test_pack_map_rejects_non_2d():
    with pytest.raises(ValueError):
        kernel.pack_map(f2d_reduced(-3))


def test_python_chordal_helper_matches_core():
    from ivpp._kernel_py import _chord_grid

    vals = np.asarray([0.0, 1.0, -1.0, 3.5, 1e120, np.inf, -np.inf, 1e-30])
    for a in vals:
        for b in vals:
            got = float(_chord_grid(np.asarray([a]), np.asarray([b]))[0])
            aa = np.inf if np.isinf(a) else float(a)
            bb = np.inf if np.isinf(b) else float(b)
            want = chordal(
                float("inf") if np.isinf(aa) else aa,
                float("inf") if np.isinf(bb) else bb,
            )
            assert got == pytest.approx(want, abs=1e-12)
