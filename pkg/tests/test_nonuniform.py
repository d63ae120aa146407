import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sinrq.errors import Malformed, TooSmall
from sinrq.model import SinrParams, Transmitter
from sinrq.nonuniform import (NoReceptionCertificate, NonUniformEngine, StrongestPair,
                              nu_assemble_direct, nu_assemble_telescoped, sample_size)
from sinrq.oracle import exact_sinr, strongest_order
from sinrq.uniform import UniformEngine

from conftest import random_txs, sandwich_problems

T = Transmitter


def test_telescoping_examples():
    assert nu_assemble_direct([4, 2, 1], [0, 3, 3]) == 12
    assert nu_assemble_telescoped([4, 2, 1], [0, 3, 3]) == 12
    assert nu_assemble_telescoped([5, 3, 2, 1], [0, 7, 7, 7]) == 5 * 7
    with pytest.raises(Malformed):
        nu_assemble_telescoped([4, 2, 1], [0, 3, 2])
    with pytest.raises(Malformed):
        nu_assemble_telescoped([4, 2, 1], [1, 3, 3])


levels_and_counts = st.integers(1, 12).flatmap(lambda m: st.tuples(
    st.lists(st.fractions(0, 100), min_size=m, max_size=m).map(lambda e: sorted(e, reverse=True)),
    st.lists(st.integers(0, 50), min_size=m, max_size=m).map(lambda d: [0] + list(np.cumsum(d)))))


@given(levels_and_counts)
def test_telescoped_equals_direct(ec):
    e, c = ec
    c = [int(v) for v in c]
    assert nu_assemble_telescoped(e, c) == nu_assemble_direct(e, c)


@given(levels_and_counts, st.floats(0, 0.3), st.integers(0, 2 ** 32 - 1))
def test_relative_perturbation(ec, delta, seed):
    e, c = ec
    c = [int(v) for v in c]
    X = nu_assemble_telescoped(e, c)
    rng = np.random.default_rng(seed)
    d = Fraction(delta)
    # telescoped coefficients are non-negative, so scaling each count within 1 +- delta
    # moves X by at most the same factor; sorting keeps every count inside its own bounds
    cp = sorted(Fraction(v) * (1 + d * Fraction(float(rng.uniform(-1, 1)))) for v in c)
    Xp = nu_assemble_telescoped(e, cp)
    assert (1 - d) * X <= Xp <= (1 + d) * X


def test_sample_size():
    assert sample_size(2) == 2
    assert sample_size(1024) == 320
    assert sample_size(10 ** 6) < 10 ** 6


def test_two_transmitters_are_exhaustive():
    p = SinrParams(2.0, 1.5, 0.0, 0.2)
    S = [T(0, 0, 0, 1), T(1, 3, 0, 9)]
    eng = NonUniformEngine(p, S)
    sp = eng.find_strongest_pair((1.0, 0.0))
    assert isinstance(sp, StrongestPair) and sp.exact
    order = strongest_order(S, (1.0, 0.0), 2.0)
    assert (sp.s, sp.second) == (order[0].id, order[1].id)
    with pytest.raises(TooSmall):
        NonUniformEngine(p, S[:1]).find_strongest_pair((1.0, 0.0))


def test_interferers_on_the_top_cone_are_exact():
    p = SinrParams(2.0, 1.5, 0.0, 0.5)
    S = [T(0, 0.5, 0, 1), T(1, 0, 1.0, 1), T(2, -2.0, 0, 4), T(3, 0, -3.0, 9)]
    eng = NonUniformEngine(p, S)
    res = eng.query((0.0, 0.0))
    assert res.candidate == 0
    assert res.stilde == pytest.approx(exact_sinr(S, (0.0, 0.0), p)[1], rel=1e-12)


def strongest_pair_trials(rng, trials, n):
    p = SinrParams(2.0, 1.5, 0.0, 0.2)
    out = []
    for _ in range(trials // 10):
        S = random_txs(rng, n, "nonuniform")
        eng = NonUniformEngine(p, S, seed=int(rng.integers(1 << 30)))
        for q in rng.uniform(0, math.sqrt(n), (10, 2)):
            q = tuple(q)
            out.append((S, q, eng.find_strongest_pair(q)))
    return out


def test_strongest_pair_paths_are_sound():
    rng = np.random.default_rng(0)
    kinds = set()
    for S, q, sp in strongest_pair_trials(rng, 300, 400):
        order = strongest_order(S, q, 2.0)
        _, sinr = exact_sinr(S, q, SinrParams(2.0, 1.5, 0.0, 0.2))
        if isinstance(sp, NoReceptionCertificate):
            kinds.add("certificate")
            assert sinr < 1 and sp.bound < 1
            continue
        assert sp.s == order[0].id
        true2 = order[1].power / math.hypot(order[1].x - q[0], order[1].y - q[1]) ** 2
        if sp.exact:
            kinds.add("exact")
            assert sp.second == order[1].id
        else:
            kinds.add("approx")
            x = (1 + 0.1) ** 0.5
            assert sp.nrg1 <= true2 * (1 + 1e-12) and true2 <= x * sp.nrg1 * (1 + 1e-9)
    assert {"exact", "certificate"} <= kinds


@pytest.mark.parametrize("eps", [0.5, 0.2])
def test_random_sandwich_under_updates(eps):
    p = SinrParams(3.0, 1.5, 0.05, eps)
    rng = np.random.default_rng(int(eps * 10))
    S = {t.id: t for t in random_txs(rng, 300, "nonuniform")}
    eng = NonUniformEngine(p, S.values(), seed=3)
    nid = 1000
    for step in range(200):
        if rng.random() < 0.5:
            pid = int(rng.choice(sorted(S)))
            eng.delete(pid)
            del S[pid]
        else:
            S[nid] = T(nid, *map(float, rng.uniform(0, 17, 2)), float(10 ** rng.uniform(0, 3)))
            eng.insert(S[nid])
            nid += 1
        if step % 2 == 0:
            q = tuple(rng.uniform(0, 17, 2))
            bad, _ = sandwich_problems(eng, list(S.values()), q, p)
            assert bad == []
            ref = eng.query_conical_reference(q)
            assert ref.candidate == exact_sinr(list(S.values()), q, p)[0]


def test_equal_powers_agree_with_uniform_sandwich():
    p = SinrParams(2.0, 1.5, 0.0, 0.2)
    rng = np.random.default_rng(11)
    S = random_txs(rng, 200)
    nu, uni = NonUniformEngine(p, S), UniformEngine(p, S)
    for q in rng.uniform(0, 14, (20, 2)):
        for eng in (nu, uni):
            bad, _ = sandwich_problems(eng, S, tuple(q), p)
            assert bad == []


def test_seeded_sampling_is_deterministic():
    p = SinrParams(2.0, 1.5, 0.0, 0.2)
    rng = np.random.default_rng(12)
    S = random_txs(rng, 500, "nonuniform")
    qs = [tuple(q) for q in rng.uniform(0, 22, (20, 2))]
    a = [NonUniformEngine(p, S, seed=5).query(q) for q in qs]
    b = [NonUniformEngine(p, S, seed=5).query(q) for q in qs]
    assert a == b


def test_certifying_query_reports_no_reception():
    p = SinrParams(2.0, 1.5, 0.0, 0.2)
    rng = np.random.default_rng(13)
    S = random_txs(rng, 600, "nonuniform")
    eng = NonUniformEngine(p, S, certify=True)
    seen = 0
    for q in rng.uniform(0, 24, (60, 2)):
        res = eng.query(tuple(q))
        if res.candidate is None:
            seen += 1
            assert exact_sinr(S, tuple(q), p)[1] < 1
    assert seen > 0
