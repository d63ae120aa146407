import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sinrq.errors import DuplicateId, TooSmall, UnknownId
from sinrq.model import Transmitter
from sinrq.nn import DynamicNN
from sinrq.oracle import exact_nn2


def oracle(pts, q):
    return exact_nn2([Transmitter(i, x, y, 1.0) for i, (x, y) in pts.items()], q)


def test_collinear_and_ties():
    nn = DynamicNN([(0, 1.0, 0.0), (1, 2.0, 0.0), (2, 4.0, 0.0)])
    assert nn.nearest_two((-1.0, 0.0)) == (0, 1)
    nn = DynamicNN([(7, 1.0, 0.0), (3, -1.0, 0.0), (9, 5.0, 0.0)])
    assert nn.nearest_two((0.0, 0.0)) == (3, 7)


def test_errors():
    nn = DynamicNN([(0, 0.0, 0.0)])
    with pytest.raises(TooSmall):
        nn.nearest_two((1.0, 1.0))
    with pytest.raises(DuplicateId):
        nn.insert(0, 1.0, 1.0)
    with pytest.raises(UnknownId):
        nn.delete(5)


def test_insert_then_delete_restores_answers():
    rng = np.random.default_rng(0)
    pts = {i: tuple(rng.uniform(0, 10, 2)) for i in range(200)}
    nn = DynamicNN([(i, x, y) for i, (x, y) in pts.items()])
    qs = rng.uniform(0, 10, (50, 2))
    before = [nn.nearest_two(q) for q in qs]
    for i in range(200, 260):
        nn.insert(i, *rng.uniform(0, 10, 2))
    for i in range(200, 260):
        nn.delete(i)
    assert [nn.nearest_two(q) for q in qs] == before


def test_static_random_set():
    rng = np.random.default_rng(1)
    pts = {i: tuple(rng.uniform(0, 30, 2)) for i in range(500)}
    nn = DynamicNN([(i, x, y) for i, (x, y) in pts.items()])
    for q in rng.uniform(0, 30, (200, 2)):
        assert nn.nearest_two(q) == oracle(pts, q)


def test_random_interleaving():
    rng = np.random.default_rng(2)
    pts, nn, nid = {}, DynamicNN(buffer_size=8), 0
    for step in range(1000):
        if len(pts) > 2 and rng.random() < 0.45:
            pid = int(rng.choice(sorted(pts)))
            nn.delete(pid)
            del pts[pid]
        else:
            # a coarse grid forces equal distances
            pts[nid] = (float(rng.integers(0, 15)), float(rng.integers(0, 15)))
            nn.insert(nid, *pts[nid])
            nid += 1
        if step % 10 == 0 and len(pts) >= 2:
            q = tuple(rng.integers(0, 15, 2) + 0.5 * rng.integers(0, 2, 2))
            assert nn.nearest_two(q) == oracle(pts, q)
    assert nn.rebuilds > 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 6), st.integers(0, 6)), min_size=3, max_size=80),
       st.integers(0, 6), st.integers(0, 6))
def test_matches_oracle_after_any_history(ops, qx, qy):
    pts, nn, nid = {}, DynamicNN(buffer_size=4), 0
    for delete, x, y in ops:
        if delete and pts:
            pid = min(pts)
            nn.delete(pid)
            del pts[pid]
        else:
            pts[nid] = (float(x), float(y))
            nn.insert(nid, float(x), float(y))
            nid += 1
    if len(pts) >= 2:
        assert nn.nearest_two((qx + 0.25, float(qy))) == oracle(pts, (qx + 0.25, float(qy)))
