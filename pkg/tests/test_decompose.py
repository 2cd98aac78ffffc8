import json
import math
import random
from fractions import Fraction

import pytest

from ivpp import serialize
from ivpp.decompose import (
    ComponentDecomposition,
    NoClosure,
    NonRealBoundary,
    NotACycle,
    PoleHit,
    _require_single_cycle,
    boundaries_analytic,
    boundaries_empirical,
    classify,
    decompose,
    trace_flow,
)
from ivpp.ivpp2d import branches
from ivpp.maps import f2d, lv_recurrence_map

from conftest import f2d_exact

SQ5 = math.sqrt(5.0)
B_PLUS = -2 + SQ5
B_MINUS = -2 - SQ5


# -- trace_flow ------------------------------------------------------------------


def test_trace_flow_period3_exact_points():
    # oracle: exact iteration from (2, -3/2)
    p = (Fraction(2), Fraction(-3, 2))
    exact = [p]
    for _ in range(3):
        exact.append(f2d_exact(*exact[-1]))
    assert exact[1] == (Fraction(-5), Fraction(3, 5))
    assert exact[2] == (Fraction(-1, 3), Fraction(9))
    assert exact[3] == exact[0]

    trace = trace_flow(branches(3)[0], 2.0)
    assert trace.closed
    for point, (ex, ey) in zip(trace.points, exact):
        assert point[0].value == pytest.approx(float(ex), abs=1e-12)
        assert point[1].value == pytest.approx(float(ey), abs=1e-12)


def test_trace_flow_period4_pattern():
    trace = trace_flow(branches(4)[0], 2.0)
    want = [(2, -0.5), (-3, 1 / 3), (-0.5, 2), (1 / 3, -3), (2, -0.5)]
    for point, (wx, wy) in zip(trace.points, want):
        assert point[0].value == pytest.approx(wx)
        assert point[1].value == pytest.approx(wy)


def test_trace_flow_pole_hits():
    with pytest.raises(PoleHit) as err:
        trace_flow(branches(3)[0], 1.0)
    assert err.value.step == 1
    with pytest.raises(PoleHit) as err:
        trace_flow(branches(3)[0], 0.0)
    assert err.value.step == 0


# -- analytic boundaries -----------------------------------------------------------


def test_boundaries_analytic_printed_sets():
    assert boundaries_analytic(branches(3)[0]) == pytest.approx([-1.0, 1.0, math.inf])
    assert boundaries_analytic(branches(4)[0]) == pytest.approx([-1.0, 0.0, 1.0, math.inf])
    b5p = boundaries_analytic(branches(5)[0])
    assert b5p == pytest.approx([-1.0, -B_PLUS, B_PLUS, 1.0, math.inf])
    b5m = boundaries_analytic(branches(5)[1])
    assert b5m == pytest.approx([B_MINUS, -1.0, 1.0, -B_MINUS, math.inf])
    b6 = boundaries_analytic(branches(6)[0])
    assert b6 == pytest.approx([-1.0, -1 / 3, 0.0, 1 / 3, 1.0, math.inf])


def test_non_real_boundary_guard(monkeypatch):
    from importlib import import_module

    dec = import_module("ivpp.decompose")
    from ivpp.core import ExtendedComplex

    monkeypatch.setattr(dec, "boundary_cs", lambda n, k: [ExtendedComplex(1 + 1j)])
    with pytest.raises(NonRealBoundary):
        dec.boundaries_analytic(branches(3)[0])


# -- empirical boundaries ------------------------------------------------------------


def test_empirical_agrees_with_analytic_everywhere():
    for n in (3, 4, 5, 6):
        for b in branches(n):
            ana = boundaries_analytic(b)
            emp = boundaries_empirical(f2d(), b.point, n)
            assert len(ana) == len(emp)
            for u, v in zip(ana, emp):
                if math.isinf(u):
                    assert math.isinf(v)
                else:
                    assert abs(u - v) < 1e-7


def test_empirical_on_the_1d_recurrence():
    # boundary oracle: the pole of -x/(1 - x) is x = 1, plus infinity itself
    got = boundaries_empirical(lv_recurrence_map(), lambda x: (x,), 2)
    assert len(got) == 2
    assert got[0] == pytest.approx(1.0, abs=1e-7)
    assert math.isinf(got[1])


def test_empirical_no_closure_on_a_wrong_period():
    with pytest.raises(NoClosure):
        boundaries_empirical(f2d(), branches(3)[0].point, 4)


# -- decomposition -----------------------------------------------------------------


EXPECTED_SIGMA = {
    (3, 1): (2, 3, 1),
    (4, 1): (2, 3, 4, 1),
    (5, 1): (2, 3, 4, 5, 1),
    (5, 2): (3, 4, 5, 1, 2),
    (6, 1): (2, 3, 4, 5, 6, 1),
}


@pytest.mark.parametrize("method", ["analytic", "empirical"])
def test_decompose_sigma_tables(method):
    for (n, k), want in EXPECTED_SIGMA.items():
        d = decompose(branches(n)[k - 1], method=method)
        assert d.sigma == want
        assert d.n_components == n
        assert d.convention == "left-closed"


def test_sigma_is_a_single_cycle_property():
    for n in (3, 4, 5, 6):
        for b in branches(n):
            d = decompose(b)
            sigma = d.sigma
            # sigma^n = identity, sigma^k != identity for 0 < k < n
            perm = list(range(1, n + 1))
            for k in range(1, n + 1):
                perm = [sigma[i - 1] for i in perm]
                if k < n:
                    assert perm != list(range(1, n + 1))
            assert perm == list(range(1, n + 1))


def test_not_a_cycle_guard():
    d = ComponentDecomposition(
        period=3,
        branch="m=1",
        convention="left-closed",
        boundaries=(-1.0, 1.0, math.inf),
        sigma=(1, 2, 3),
    )
    with pytest.raises(NotACycle):
        _require_single_cycle(d)


def test_intervals_tile_the_extended_line():
    for n in (3, 4, 5, 6):
        d = decompose(branches(n)[0])
        ivs = d.intervals()
        assert len(ivs) == n
        assert ivs[0][0] == -math.inf
        assert ivs[-1][1] == math.inf
        for (lo1, hi1), (lo2, hi2) in zip(ivs[:-1], ivs[1:]):
            assert hi1 == lo2


# -- classify ---------------------------------------------------------------------


def test_classify_examples():
    d3 = decompose(branches(3)[0])
    assert classify(d3, -1.0) == 2  # [-1, 1) is the second component, left-closed
    assert classify(d3, 0.999) == 2
    assert classify(d3, math.inf) == 3
    assert classify(d3, -math.inf) == 3  # one projective point
    d4 = decompose(branches(4)[0])
    assert classify(d4, 1.0) == 4


def test_classify_is_a_partition():
    """Every finite x lands in exactly one interval under either convention."""
    import itertools

    d_left = decompose(branches(4)[0])
    from ivpp.lv3d import lv_decompose_period2

    d_right = lv_decompose_period2(0.0, "+")
    for d in (d_left, d_right):
        for x in [-10.0, *d.finite_boundaries(), 0.3, 0.9999, 1.0001, 7.5]:
            idx = d.classify(x)
            assert 1 <= idx <= d.n_components
            lo, hi = d.intervals()[idx - 1]
            if d.convention == "left-closed":
                assert (lo == -math.inf or lo <= x + 1e-9) and x < hi + 1e-9
            else:
                assert lo - 1e-9 < x and (hi == math.inf or x <= hi + 1e-9)


def test_cycle_covariance_100_points():
    rng = random.Random(0xCAFE)
    m = f2d()
    for n in (3, 4, 5, 6):
        for b in branches(n):
            d = decompose(b)
            done = 0
            while done < 100:
                x = rng.uniform(-5, 5)
                if abs(x) < 0.02 or any(abs(x - c) < 1e-6 for c in d.finite_boundaries()):
                    continue
                img = m.apply(b.point(x))
                if img[0].is_infinite:
                    continue
                assert d.classify(img[0].value.real) == d.sigma[d.classify(x) - 1]
                done += 1


# -- boundary provenance -------------------------------------------------------------


def test_boundaries_lie_on_denominator_zero_curves():
    """Each finite analytic boundary is a pole of some flow iterate: the
    denominator of a component, evaluated along the flow, changes sign
    within 1e-6 of the boundary."""
    m = f2d()
    eps = 1e-6
    for n in (3, 4, 5, 6):
        for b in branches(n):
            for c in boundaries_analytic(b)[:-1]:
                witnessed = False
                for k in range(n):
                    for pick in (0, 1):
                        lo = _den_along_flow(m, b, c - eps, k, pick)
                        hi = _den_along_flow(m, b, c + eps, k, pick)
                        if lo is None or hi is None:
                            continue
                        if lo == 0 or hi == 0 or (lo < 0) != (hi < 0):
                            witnessed = True
                assert witnessed, f"boundary {c} of n={n} m={b.m} has no pole witness"


def _den_along_flow(m, branch, x, k, component):
    try:
        coords = (complex(x), complex(branch.rho / x))
    except ZeroDivisionError:
        return None
    for _ in range(k):
        coords = m.eval_raw(coords)
        if any(math.isnan(c.real) or math.isinf(c.real) for c in coords):
            return None
    d = m.components[component][1].eval(coords)
    return d.real if abs(d.imag) < 1e-12 else None


# -- serialization --------------------------------------------------------------------


def test_json_document_shape():
    d = decompose(branches(3)[0])
    text = serialize.dumps(d.to_json_dict())
    doc = json.loads(text)
    assert doc["period"] == 3
    assert doc["convention"] == "left-closed"
    assert doc["boundaries"][0] == "-inf"
    assert doc["boundaries"][1] == pytest.approx(-1.0)
    assert doc["sigma"] == [2, 3, 1]
    assert doc["rho"] == pytest.approx(-3.0)


def test_json_17_digit_round_trip():
    value = 0.1 + 0.2  # famous non-representable sum
    text = serialize.dumps({"v": value})
    assert json.loads(text)["v"] == value
