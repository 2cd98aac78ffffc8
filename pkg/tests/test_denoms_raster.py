import numpy as np
import pytest

from ivpp.decompose import decompose
from ivpp.denoms import denominator_zero_curves
from ivpp.ivpp2d import branches
from ivpp.maps import f2d, f3d
from ivpp.poly import Polynomial
from ivpp.raster import lv_raster, raster


# -- denominator zero sets -------------------------------------------------------


def test_k1_denominators_are_the_maps_own():
    zs = denominator_zero_curves(f2d(), 1)
    # normalized denominators: x - 1 and y - 1 (same zero sets as 1-x, 1-y)
    from fractions import Fraction

    x = Polynomial.var(0, 2)
    y = Polynomial.var(1, 2)
    one = Polynomial.const(Fraction(1), 2)
    assert zs.denominators == (x - one, y - one)


def test_f3d_k1_denominator_contains_the_printed_surface():
    zs = denominator_zero_curves(f3d(), 1)
    # 1 - z + z*x (already monic in the graded-lex order, so kept as given)
    from fractions import Fraction

    terms = {(0, 0, 0): Fraction(1), (0, 0, 1): Fraction(-1), (1, 0, 1): Fraction(1)}
    assert Polynomial(3, terms) in zs.denominators


def test_k1_layer_marks_the_pole_lines():
    zs = denominator_zero_curves(f2d(), 2, (-2, 2, -2, 2), (80, 80))
    layer1 = zs.layer(1)
    xs = -2 + 4 * (np.arange(80) + 0.5) / 80
    col = int(np.argmin(np.abs(xs - 1.0)))
    row = col
    assert layer1[:, col - 1 : col + 1].any(axis=1).all()  # the line x = 1
    assert layer1[row - 1 : row + 1, :].any(axis=0).all()  # the line y = 1
    assert (zs.first_pole_depth[:, col - 1 : col + 1] == 1).any()


def test_depth_guard_and_dimension_guard():
    with pytest.raises(ValueError):
        denominator_zero_curves(f2d(), 7)
    with pytest.raises(ValueError):
        denominator_zero_curves(f3d(), 2, (-1, 1, -1, 1), (10, 10))


def test_depth2_layer_marks_preimages_of_the_pole_line():
    """x(1-y)/(1-x) = 1 first sends (2/3, 1/2) onto the pole line x = 1 at
    step 2, so its cell belongs to the depth-2 layer."""
    from fractions import Fraction

    x0, y0 = Fraction(2, 3), Fraction(1, 2)
    image_x = x0 * (1 - y0) / (1 - x0)
    assert image_x == 1  # exact oracle
    window = (0.5, 0.85, 0.3, 0.7)
    zs = denominator_zero_curves(f2d(), 3, window, (70, 80))
    from ivpp.denoms import cell_centers

    xs, ys = cell_centers(window, (70, 80))
    j = int(np.argmin(np.abs(xs - 2 / 3)))
    i = int(np.argmin(np.abs(ys - 0.5)))
    patch = zs.first_pole_depth[i - 1 : i + 2, j - 1 : j + 2]
    assert (patch == 2).any()


def test_deeper_layers_appear():
    zs = denominator_zero_curves(f2d(), 3, (-4, 4, -4, 4), (160, 160))
    depths = set(np.unique(zs.first_pole_depth).tolist())
    assert {1, 2, 3} <= depths


def test_period3_boundaries_intersect_shallow_layers():
    """On the level x*y = -3, the component cuts {-1, 1} sit where the
    first three layers cross the variety."""
    zs = denominator_zero_curves(f2d(), 3, (-4, 4, -4, 4), (400, 400))
    from ivpp.denoms import cell_centers

    xs, ys = cell_centers((-4, 4, -4, 4), (400, 400))
    X, Y = np.meshgrid(xs, ys)
    on_variety = np.abs(X * Y + 3.0) < 0.08
    marked = zs.first_pole_depth > 0
    hits_x = X[on_variety & marked]
    assert hits_x.size > 0
    for cut in (-1.0, 1.0):
        assert np.min(np.abs(hits_x - cut)) < 0.05


# -- rasters -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def small_period3_raster():
    b = branches(3)[0]
    d = decompose(b)
    return raster(f2d(), (-4, 4, -4, 4), (200, 200), n_max=4, decomp=d, branch=b), d, b


def test_raster_assigns_three_classes(small_period3_raster):
    R, d, b = small_period3_raster
    mask = R.component > 0
    assert sorted(np.unique(R.component[mask]).tolist()) == [1, 2, 3]
    assert (R.period[mask] == 3).all()


def test_raster_pgm_format(small_period3_raster):
    R, _, _ = small_period3_raster
    blob = R.to_pgm_bytes("component")
    assert blob.startswith(b"P5\n200 200\n255\n")
    assert len(blob) == len(b"P5\n200 200\n255\n") + 200 * 200


def test_raster_determinism(small_period3_raster):
    R, d, b = small_period3_raster
    again = raster(f2d(), (-4, 4, -4, 4), (200, 200), n_max=4, decomp=d, branch=b)
    assert R.to_pgm_bytes() == again.to_pgm_bytes()
    assert np.array_equal(R.period, again.period)


def test_raster_csv(tmp_path, small_period3_raster):
    R, _, _ = small_period3_raster
    path = tmp_path / "tiles.csv"
    R.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,period,component"
    assert len(lines) == 1 + 200 * 200


def test_period_layer_band_mode():
    """With a cell-sized tolerance the raw period layer shows the variety band;
    at the strict default tolerance off-variety cells stay empty."""
    R = raster(f2d(), (-4, 4, -4, 4), (200, 200), n_max=4, tol=0.05)
    xs, ys = R.cells()
    X, Y = np.meshgrid(xs, ys)
    near = np.abs(X * Y + 3.0) < 0.02
    frac = (R.period[near] == 3).mean()
    assert frac > 0.9
    strict = raster(f2d(), (-4, 4, -4, 4), (200, 200), n_max=4)
    far = (np.abs(X - Y) > 0.05) & (strict.period >= 0)
    assert (strict.period[far] == 0).all()


def test_successor_property_on_raster_cells(small_period3_raster):
    R, d, b = small_period3_raster
    m = f2d()
    xs, _ = R.cells()
    ok = bad = 0
    for i, j in zip(*np.nonzero(R.component > 0)):
        x = float(xs[j])
        img = m.apply(b.point(x))
        if img[0].is_infinite:
            continue
        if d.classify(img[0].value.real) == d.sigma[int(R.component[i, j]) - 1]:
            ok += 1
        else:
            bad += 1
    assert ok > 0 and bad == 0


def test_raster_off_variety_cells_are_unclassified(small_period3_raster):
    R, _, _ = small_period3_raster
    xs, ys = R.cells()
    X, Y = np.meshgrid(xs, ys)
    far = np.abs(X * Y + 3.0) > 0.5
    assert (R.component[far] == 0).all()


def test_raster_threads_are_equivalent():
    b = branches(3)[0]
    d = decompose(b)
    R1 = raster(f2d(), (-3, 3, -3, 3), (120, 120), n_max=4, decomp=d, branch=b, threads=1)
    R4 = raster(f2d(), (-3, 3, -3, 3), (120, 120), n_max=4, decomp=d, branch=b, threads=4)
    assert np.array_equal(R1.period, R4.period)
    assert np.array_equal(R1.component, R4.component)


def test_resolution_guard():
    with pytest.raises(ValueError):
        raster(f2d(), (-1, 1, -1, 1), (5000, 5000), n_max=2)


# -- the striped 3d raster ------------------------------------------------------------


def test_lv_raster_stripes():
    R = lv_raster((-3, 3, -4.5, 4.5), (120, 90), sign="+", stripe_half_width=0.2)
    xs, rs = R.cells()
    on_stripe_rows = [i for i, r in enumerate(rs) if abs(r - round(r)) <= 0.2]
    off_stripe_rows = [i for i, r in enumerate(rs) if abs(r - round(r)) > 0.2]
    assert (R.component[off_stripe_rows, :] == 0).all()
    classified = R.component[on_stripe_rows, :]
    assert (classified > 0).any()
    assert set(np.unique(classified).tolist()) <= {0, 1, 2, 3}
    # boundaries are r-independent: the classified columns split at x = 0 and 1
    j_neg = int(np.argmin(np.abs(xs + 2.0)))
    j_mid = int(np.argmin(np.abs(xs - 0.5)))
    j_big = int(np.argmin(np.abs(xs - 2.0)))
    col_classes = R.component[on_stripe_rows][:, [j_neg, j_mid, j_big]]
    col_classes = col_classes[(col_classes > 0).all(axis=1)]
    assert col_classes.size > 0
    assert (col_classes == np.array([1, 2, 3])).all()


def test_lv_raster_skips_complex_branch_cells():
    # D(2, r) = r(r-8) < 0 for 0 < r < 8: x = 2 on the r = 3 stripe is complex
    R = lv_raster((1.5, 2.5, 2.8, 3.2), (40, 10), sign="+", stripe_half_width=0.3)
    assert (R.component == 0).all()
