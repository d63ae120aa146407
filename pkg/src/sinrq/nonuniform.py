"""Arbitrary-power engine over lifted points (x, y, p^(1/alpha)).

A transmitter is at least L strong at q exactly when its lifted point lies in
the cone of parameter L^(1/alpha) with apex q; the counting structures use the
inscribed l-pyramids instead.  A query first finds the strongest transmitter s
and either the second strongest or a bracket for its strength, then counts
lifted points in the pyramids P(rho_1) > ... > P(rho_m) (rho_j = top^(1/alpha)
* x^(-j/2)) and charges each band between consecutive pyramids the strength
of the cone two steps above it.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .counting import WedgeCounter
from .errors import AssumptionViolated, DuplicateId, EmptySet, Malformed, TooSmall, UnknownId
from .geometry import build_shell_system, conical_levels, orientation, ring_parameters
from .model import ApproxQueryResult, Classification, SinrParams, Transmitter, make_result, strengths
from .oracle import strongest_order
from .uniform import QueryStats, exact_result

# guards the strength comparisons that rely on pyramid-in-cone containment
MARGIN = 1e-9


@dataclass(frozen=True)
class StrongestPair:
    s: int
    s_strength: float
    second: Optional[int]
    nrg1: float
    exact: bool
    sample_size: int
    reported: int


@dataclass(frozen=True)
class NoReceptionCertificate:
    """Every transmitter's sinr at q is below ``bound`` (< 1)."""
    bound: float
    sample_size: int
    reported: int


def sample_size(n: int) -> int:
    return min(n, math.ceil(math.sqrt(n) * math.log2(n))) if n > 1 else n


def nu_assemble_direct(e_levels: Sequence, cumulative_counts: Sequence):
    c = list(cumulative_counts)
    return sum(e_levels[i - 1] * (c[i] - c[i - 1]) for i in range(1, len(c)))


def nu_assemble_telescoped(e_levels: Sequence, cumulative_counts: Sequence):
    """e_m*c_{m+1} + sum_{i=2..m} (e_{i-1} - e_i)*c_i for counts c_1..c_{m+1}, c_1 = 0.

    Works on any number type; with exact types it equals the direct sum exactly.
    """
    c = list(cumulative_counts)
    m = len(c) - 1
    if m < 1 or len(e_levels) < m:
        raise Malformed("need counts c_1..c_{m+1} and at least m levels")
    if c[0] != 0:
        raise Malformed("the first cumulative count must be 0")
    if any(b < a for a, b in zip(c, c[1:])):
        raise Malformed("cumulative counts must be non-decreasing")
    e = list(e_levels[:m])
    return e[m - 1] * c[m] + sum((e[i - 2] - e[i - 1]) * c[i - 1] for i in range(2, m + 1))


class NonUniformEngine:
    def __init__(self, params: SinrParams, transmitters=(), seed: int = 0, strict: bool = True,
                 certify: bool = False, kmin: int = 5):
        self.params = params
        self.strict = strict
        self.certify = certify
        self.x, self.l = ring_parameters(params.eps, params.alpha)
        self.orient = orientation(self.l)
        self.kappa = self.orient.cos_half ** (-params.alpha) * (1 + MARGIN)
        self.counter = WedgeCounter(self.l, params.alpha, kmin=kmin)
        self.tx: dict[int, Transmitter] = {}
        self.order: list[int] = []
        self.rng = np.random.default_rng(seed)
        self.stats = QueryStats()
        self.oversized_reports = 0
        for t in transmitters:
            self.insert(t)

    def __len__(self) -> int:
        return len(self.tx)

    def __contains__(self, pid) -> bool:
        return pid in self.tx

    def get(self, pid: int) -> Transmitter:
        try:
            return self.tx[pid]
        except KeyError:
            raise UnknownId(f"unknown id {pid}") from None

    def transmitters(self) -> list[Transmitter]:
        return [self.tx[i] for i in self.order]

    def insert(self, t: Transmitter) -> None:
        if t.id in self.tx:
            raise DuplicateId(f"id {t.id} already present")
        self.counter.insert(t.id, t.x, t.y, t.power)
        self.tx[t.id] = t
        bisect.insort(self.order, t.id)

    def delete(self, pid: int) -> None:
        if pid not in self.tx:
            raise UnknownId(f"unknown id {pid}")
        self.counter.delete(pid)
        del self.tx[pid]
        del self.order[bisect.bisect_left(self.order, pid)]

    def _strengths(self, q, ids) -> np.ndarray:
        ts = [self.tx[i] for i in ids]
        return strengths(q[0], q[1], [t.x for t in ts], [t.y for t in ts], [t.power for t in ts],
                         self.params.alpha)

    @staticmethod
    def _rank(ids: np.ndarray, nrg: np.ndarray) -> np.ndarray:
        return np.lexsort((ids, -nrg))

    def find_strongest_pair(self, q, rng=None, certify: bool = True):
        """Strongest transmitter plus the second one (exact) or a bracket for it.

        Returns a ``NoReceptionCertificate`` instead when ``certify`` is set and the
        sampled evidence proves every sinr at q is below 1.
        """
        q = (float(q[0]), float(q[1]))
        rng = self.rng if rng is None else rng
        n = len(self.tx)
        if n < 2:
            raise TooSmall("need at least two transmitters")
        alpha = self.params.alpha
        k = sample_size(n)
        self.stats = QueryStats(visits=k, path="exhaustive")
        if k >= n:
            ids = np.array(self.order, dtype=np.int64)
            nrg = self._strengths(q, ids)
            o = self._rank(ids, nrg)
            return StrongestPair(int(ids[o[0]]), float(nrg[o[0]]), int(ids[o[1]]), float(nrg[o[1]]),
                                 True, n, 0)
        pick = rng.choice(n, size=k, replace=False)
        T = np.array([self.order[i] for i in pick], dtype=np.int64)
        nT = self._strengths(q, T)
        oT = self._rank(T, nT)
        t1, e1 = int(T[oT[0]]), float(nT[oT[0]])
        R = self.counter.report_pyramid(q, e1 ** (1.0 / alpha))
        self.stats.visits += self.counter.last_visits
        if len(R) > 8 * math.sqrt(n) * math.log2(n):
            self.oversized_reports += 1
        pool = np.union1d(R, [t1])
        nP = self._strengths(q, pool)
        oP = self._rank(pool, nP)
        a1, n1 = int(pool[oP[0]]), float(nP[oP[0]])
        if len(pool) >= 2:
            a2, n2 = int(pool[oP[1]]), float(nP[oP[1]])
            if n2 >= self.kappa * e1:
                # everything at least kappa*e1 strong is reported, so both top ranks are exact
                self.stats.path = "exact"
                return StrongestPair(a1, n1, a2, n2, True, k, len(R))
            if n1 >= self.kappa * e1:
                # the true second lies in [n2, kappa*e1) and kappa <= (1+delta)^alpha
                self.stats.path = "approx"
                return StrongestPair(a1, n1, None, n2, False, k, len(R))
        if certify:
            seen = np.union1d(R, T)
            nS = self._strengths(q, seen)
            bound = self.kappa * e1 / (math.fsum(nS) - float(nS.max()) + self.params.noise)
            if bound < 1:
                self.stats.path = "certificate"
                return NoReceptionCertificate(bound, k, len(R))
        # nothing reaches kappa*e1: widen to the cone of the second sample
        e2 = float(nT[oT[1]])
        rho = e2 ** (1.0 / alpha) * self.orient.cos_half * (1 - 1e-12)
        R2 = self.counter.report_pyramid(q, rho)
        self.stats.visits += self.counter.last_visits
        if len(R2) > 8 * math.sqrt(n) * math.log2(n):
            self.oversized_reports += 1
        pool = np.union1d(R2, T)
        nP = self._strengths(q, pool)
        oP = self._rank(pool, nP)
        self.stats.path = "widened"
        return StrongestPair(int(pool[oP[0]]), float(nP[oP[0]]), int(pool[oP[1]]), float(nP[oP[1]]),
                             True, k, len(R) + len(R2))

    def _small(self, q) -> Optional[ApproxQueryResult]:
        n = len(self.tx)
        if n == 0:
            raise EmptySet("no transmitters")
        if n >= 2 and n > 1 / self.params.eps:
            return None
        if self.strict:
            if n < 2:
                raise TooSmall("need at least two transmitters")
            raise AssumptionViolated(f"n={n} must exceed 1/eps={1 / self.params.eps:g}")
        self.stats = QueryStats(path="exact")
        return exact_result(self.tx, q, self.params)

    def query(self, q, rng=None) -> ApproxQueryResult:
        q = (float(q[0]), float(q[1]))
        small = self._small(q)
        if small is not None:
            return small
        sp = self.find_strongest_pair(q, rng, certify=self.certify)
        if isinstance(sp, NoReceptionCertificate):
            return ApproxQueryResult(None, 0.0, math.inf, Classification.NO_RECEPTION)
        n = len(self.tx)
        alpha = self.params.alpha
        top = sp.nrg1 if sp.exact else self.x ** (alpha / 2) * sp.nrg1
        ss = build_shell_system(q, sp.nrg1, n, self.params, top=top, check=False)
        rhos = ss.rhos[1:]
        inside = self.counter.count_pyramids(q, rhos).sum(axis=0)
        s = self.tx[sp.s]
        hs = np.full(len(rhos), s.power ** (1.0 / alpha))
        member = np.array([self.orient.pyramid_mask(q, r, [s.x], [s.y], [h])[0] for r, h in zip(rhos, hs)])
        inside = inside - member
        per_band = np.diff(inside, prepend=0)
        far = (n - 1) - int(inside[-1])
        charge = ss.rhos[np.maximum(np.arange(ss.m) - 1, 0)] ** alpha
        total = float(np.dot(per_band, charge)) + far * ss.e0
        self.stats.rings = ss.m
        self.stats.sides = self.l
        self.stats.visits += self.counter.last_visits
        return make_result(sp.s, sp.s_strength, total + self.params.noise, self.params)

    def query_conical_reference(self, q) -> ApproxQueryResult:
        """Exact strongest pair, conical shells e_i = (1+eps/2)*e_{i-1}, brute-force banding."""
        q = (float(q[0]), float(q[1]))
        small = self._small(q)
        if small is not None:
            return small
        ts = self.transmitters()
        order = strongest_order(ts, q, self.params.alpha)
        s, s1 = order[0], order[1]
        nrg = strengths(q[0], q[1], [t.x for t in order], [t.y for t in order],
                        [t.power for t in order], self.params.alpha)
        levels = conical_levels(float(nrg[1]), len(ts), self.params.eps)
        # each interferer is charged the upper end of its band (e_{j-1}, e_j]; e0 if below e0
        charge = levels[np.searchsorted(levels, nrg[1:], "left")]
        return make_result(s.id, float(nrg[0]), float(np.sum(charge)) + self.params.noise, self.params)
