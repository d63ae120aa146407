import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sinrq.errors import Coincident, EmptySet, TooSmall, UnknownId
from sinrq.geometry import Polygon, Pyramid, Ring, orientation
from sinrq.model import INFINITE, Classification, SinrParams, Transmitter
from sinrq.oracle import Metric, exact_interference, exact_nn2, exact_range_count, exact_sic, exact_sinr
from sinrq.sic import SicStatus

T = Transmitter


def boundary_radius(l, q, t):
    """Circumradius whose polygon face passes exactly through t in float arithmetic."""
    o = orientation(l)
    f = int(o.families(q, [t.x], [t.y])[0])
    _, fq = o.query_keys(q)
    face = o.face_keys([t.x], [t.y])[f, 0]
    r = (face - fq[f]) / o.cos_half
    for _ in range(64):
        thr = o.polygon_thresholds(fq, [r])[f, 0]
        if thr == face:
            return r
        r = math.nextafter(r, math.inf if thr < face else 0.0)
    raise AssertionError("no exact boundary radius")


def test_interference_examples():
    assert exact_interference([T(0, 0, 0, 1), T(1, 3, 0, 1)], (1, 0), 0, 2) == 0.25
    assert exact_interference([T(0, 0, 0, 1)], (1, 0), 0, 2) == 0.0
    S = [T(0, 1, 0, 1), T(1, 2, 0, 1), T(2, 4, 0, 1)]
    assert exact_interference(S, (0, 0), 0, 2) == 0.3125


def test_interference_coincident():
    with pytest.raises(Coincident):
        exact_interference([T(0, 0, 0, 1), T(1, 1, 0, 1)], (1, 0), 0, 2)


def test_sinr_examples():
    p = SinrParams(2.0, 1.5, 0.0, 0.1)
    assert exact_sinr([T(0, 0, 0, 1), T(1, 3, 0, 1)], (1, 0), p) == (0, 4.0)
    assert exact_sinr([T(0, 0, 0, 1)], (1, 0), SinrParams(2.0, 1.5, 0.25, 0.1)) == (0, 4.0)
    assert exact_sinr([T(0, 0, 0, 8), T(1, 0, 3, 1)], (0, 1), SinrParams(3.0, 1.5, 0.0, 0.1))[0] == 0
    assert exact_sinr([T(0, 0, 0, 1)], (1, 0), p) == (0, INFINITE)
    with pytest.raises(EmptySet):
        exact_sinr([], (0, 0), p)


def test_sinr_tie_prefers_lower_id():
    p = SinrParams(2.0, 1.5, 0.0, 0.1)
    assert exact_sinr([T(5, 1, 0, 1), T(2, -1, 0, 1)], (0, 0), p)[0] == 2


def test_nn2_examples():
    S = [T(0, 1, 0, 1), T(1, 2, 0, 1), T(2, 4, 0, 1)]
    assert exact_nn2(S, (0, 0)) == (0, 1)
    assert exact_nn2([T(0, 1, 0, 1), T(1, 2, 0, 16)], (0, 0), Metric.WEIGHTED, 2.0) == (1, 0)
    assert exact_nn2([T(7, 1, 0, 1), T(3, -1, 0, 1), T(9, 5, 0, 1)], (0, 0)) == (3, 7)
    with pytest.raises(TooSmall):
        exact_nn2([T(0, 1, 0, 1)], (0, 0))


def test_range_count_examples():
    S = [T(i, 0.1 * i, 0.05, 1) for i in range(4)]
    assert exact_range_count(S, Polygon((0.0, 0.0), 5.0, 10)) == 4
    assert exact_range_count([], Polygon((0.0, 0.0), 5.0, 10)) == 0
    # a point on the inner boundary of a semi-open ring is counted, on the outer one not
    pt = T(0, 0.3, 0.9, 1)
    r = boundary_radius(10, (0.0, 0.0), pt)
    assert exact_range_count([pt], Ring((0.0, 0.0), r, 2 * r, 10)) == 1
    assert exact_range_count([pt], Ring((0.0, 0.0), r / 2, r, 10)) == 0
    assert exact_range_count([T(0, 0, 0.5, 4)], Pyramid((0.0, 0.0), 1.0, 10), alpha=2.0) == 1


def test_sic_example_rounds():
    S = [T(0, 1, 0, 1), T(1, 2, 0, 1), T(2, 4, 0, 1)]
    out = exact_sic(S, (0, 0), 2, SinrParams(2.0, 1.5, 0.0, 0.1))
    assert out.status is SicStatus.SUCCESS and out.rounds == 3
    assert [v for _, v, _ in out.per_round] == pytest.approx([3.2, 4.0, INFINITE], rel=1e-15)


def test_sic_oracle_failure_and_unknown():
    S = [T(0, 1, 0, 1), T(1, 2, 0, 1), T(2, 4, 0, 1)]
    out = exact_sic(S, (0, 0), 2, SinrParams(2.0, 10.0, 0.0, 0.1))
    assert out.status is SicStatus.FAILURE and out.rounds == 1
    assert out.per_round[0][2] is Classification.NO_RECEPTION
    with pytest.raises(UnknownId):
        exact_sic(S, (0, 0), 99, SinrParams(2.0, 1.5, 0.0, 0.1))


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 9)),
                min_size=2, max_size=12, unique_by=lambda t: t[:2]))
def test_interference_matches_rational_sum(pts):
    q = (Fraction(1, 3), Fraction(1, 7))
    S = [T(i, float(x), float(y), float(p)) for i, (x, y, p) in enumerate(pts)]
    want = sum(Fraction(p) / ((x - q[0]) ** 2 + (y - q[1]) ** 2) for x, y, p in pts[1:])
    got = exact_interference(S, tuple(map(float, q)), 0, 2.0)
    assert got == pytest.approx(float(want), rel=1e-12)
