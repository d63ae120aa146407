"""Nearest-pair lookup plus polygonal-ring counting; the uniform-power engine.

``RingEngine`` answers for one power class whose powers lie in [cap/spread, cap]
(uniform power: spread 1, cap = the common power).  Around q it builds the
regular l-gons B_j of circumradius d1*y^(j/2), y = ((1+eps/2)/spread)^(1/alpha),
where d1 is the distance to whichever of the two Euclidean-nearest transmitters
is not the candidate, so every interferer lies at distance >= d1.  Interferers
in B_1 are charged cap/d1^alpha, those in B_j minus B_{j-1} are charged
cap/rho_{j-2}^alpha (the ring lies in the annulus between rho_{j-2} and rho_j),
and those outside B_m are charged cap/r^alpha with r = (2*spread*n/eps)^(1/alpha)*d1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import TrapezoidCounter
from .errors import AssumptionViolated, DuplicateId, EmptySet, ModeMismatch, TooSmall, UnknownId
from .geometry import build_ring_system, orientation, ring_parameters
from .model import ApproxQueryResult, SinrParams, Transmitter, make_result, strengths
from .nn import DynamicNN
from .oracle import exact_sinr


@dataclass(frozen=True)
class Partial:
    """One class's contribution: its candidate and approximate interference without noise."""
    candidate: int
    strength: float
    intrf: float
    rings: int = 0
    visits: int = 0


@dataclass
class QueryStats:
    rings: int = 0
    sides: int = 0
    visits: int = 0
    path: str = ""


def _candidate_pair(q, ta: Transmitter, tb: Transmitter, alpha: float):
    sa, sb = strengths(q[0], q[1], [ta.x, tb.x], [ta.y, tb.y], [ta.power, tb.power], alpha)
    if sb > sa or (sb == sa and tb.id < ta.id):
        return tb, float(sb), ta
    return ta, float(sa), tb


class RingEngine:
    def __init__(self, params: SinrParams, spread: float = 1.0, cap: float | None = None,
                 kmin: int = 4):
        self.params = params
        self.spread = spread
        self.cap = cap
        self.x, self.l = ring_parameters(params.eps, params.alpha, spread)
        self.orient = orientation(self.l)
        self.nn = DynamicNN()
        self.counter = TrapezoidCounter(self.l, kmin=kmin)
        self.tx: dict[int, Transmitter] = {}

    def __len__(self) -> int:
        return len(self.tx)

    def __contains__(self, pid) -> bool:
        return pid in self.tx

    def get(self, pid: int) -> Transmitter:
        try:
            return self.tx[pid]
        except KeyError:
            raise UnknownId(f"unknown id {pid}") from None

    def insert(self, t: Transmitter) -> None:
        if t.id in self.tx:
            raise DuplicateId(f"id {t.id} already present")
        self.nn.insert(t.id, t.x, t.y)
        self.counter.insert(t.id, t.x, t.y)
        self.tx[t.id] = t

    def delete(self, pid: int) -> None:
        if pid not in self.tx:
            raise UnknownId(f"unknown id {pid}")
        self.nn.delete(pid)
        self.counter.delete(pid)
        del self.tx[pid]

    def _pair(self, q):
        a, b = self.nn.nearest_two(q)
        return _candidate_pair(q, self.tx[a], self.tx[b], self.params.alpha)

    def partial(self, q) -> Partial:
        n = len(self.tx)
        if n == 0:
            raise EmptySet("no transmitters")
        alpha = self.params.alpha
        if n == 1:
            (t,) = self.tx.values()
            nrg = float(strengths(q[0], q[1], [t.x], [t.y], [t.power], alpha)[0])
            return Partial(t.id, nrg, 0.0)
        s, nrg, s1 = self._pair(q)
        cap = s.power if self.cap is None else self.cap
        d1 = float(np.hypot(s1.x - q[0], s1.y - q[1]))
        rs = build_ring_system(q, d1, n, self.params, self.spread, check=False)
        radii = rs.circumradii[1:]
        inside = self.counter.count_polygons(q, radii).sum(axis=0)
        inside = inside - self._member(q, radii, s)
        per_ring = np.diff(inside, prepend=0)
        far = (n - 1) - int(inside[-1])
        # ring 1 is charged at d1, ring j >= 2 at rho_{j-2}
        charge_r = rs.circumradii[np.maximum(np.arange(rs.m) - 1, 0)]
        total = float(np.dot(per_ring, cap / charge_r ** alpha)) + far * cap / rs.r ** alpha
        return Partial(s.id, nrg, total, rs.m, self.counter.last_visits)

    def _member(self, q, radii: np.ndarray, t: Transmitter) -> np.ndarray:
        """Whether t lies strictly inside each polygon, by the shared predicate."""
        o = self.orient
        f = int(o.families(q, [t.x], [t.y])[0])
        if f < 0:
            return np.zeros(len(radii), dtype=np.int64)
        _, fq = o.query_keys(q)
        face = o.face_keys([t.x], [t.y])[f, 0]
        return (face < o.polygon_thresholds(fq, radii)[f]).astype(np.int64)

    def partial_annuli(self, q) -> Partial:
        """Circular-annuli reference: same charges on exact distances, counted by brute force."""
        n = len(self.tx)
        if n < 2:
            return self.partial(q)
        alpha = self.params.alpha
        s, nrg, s1 = self._pair(q)
        cap = s.power if self.cap is None else self.cap
        d1 = float(np.hypot(s1.x - q[0], s1.y - q[1]))
        base = (1 + self.params.eps / 2) / self.spread
        y = base ** (1.0 / alpha)
        r = (2 * self.spread * n / self.params.eps) ** (1.0 / alpha) * d1
        k = math.ceil(math.log(2 * self.spread * n / self.params.eps) / math.log(base))
        inner = d1 * y ** np.arange(k)
        others = [t for t in self.tx.values() if t.id != s.id]
        d = np.hypot(np.array([t.x for t in others]) - q[0], np.array([t.y for t in others]) - q[1])
        far = d >= r
        band = np.searchsorted(inner, d[~far], "right") - 1
        total = float(np.sum(cap / inner[band] ** alpha)) + np.count_nonzero(far) * cap / r ** alpha
        return Partial(s.id, nrg, total, k)


def exact_result(tx: dict, q, params: SinrParams) -> ApproxQueryResult:
    """Exact evaluation used when the live set is too small for the approximation contract."""
    cand, value = exact_sinr(list(tx.values()), q, params)
    t = tx[cand]
    nrg = float(strengths(q[0], q[1], [t.x], [t.y], [t.power], params.alpha)[0])
    intrf = 0.0 if value == math.inf else nrg / value
    return make_result(cand, nrg, intrf, params)


class UniformEngine:
    """Dynamic approximate SINR queries for transmitters sharing one power.

    With ``strict`` the live count must exceed 1/eps; otherwise small sets are
    answered exactly.
    """

    def __init__(self, params: SinrParams, transmitters=(), strict: bool = True, kmin: int = 4):
        self.params = params
        self.strict = strict
        self.ring = RingEngine(params, kmin=kmin)
        self.power: float | None = None
        self.stats = QueryStats()
        for t in transmitters:
            self.insert(t)

    def __len__(self) -> int:
        return len(self.ring)

    def __contains__(self, pid) -> bool:
        return pid in self.ring

    def get(self, pid: int) -> Transmitter:
        return self.ring.get(pid)

    def transmitters(self) -> list[Transmitter]:
        return list(self.ring.tx.values())

    def insert(self, t: Transmitter) -> None:
        if self.power is not None and len(self.ring) and t.power != self.power:
            raise ModeMismatch(f"uniform engine holds power {self.power}, got {t.power}")
        self.ring.insert(t)
        self.power = t.power

    def delete(self, pid: int) -> None:
        self.ring.delete(pid)

    def _check(self) -> bool:
        n = len(self.ring)
        if n == 0:
            raise EmptySet("no transmitters")
        if n > 1 / self.params.eps and n >= 2:
            return True
        if self.strict:
            if n < 2:
                raise TooSmall("need at least two transmitters")
            raise AssumptionViolated(f"n={n} must exceed 1/eps={1 / self.params.eps:g}")
        return False

    def query(self, q) -> ApproxQueryResult:
        q = (float(q[0]), float(q[1]))
        if not self._check():
            self.stats = QueryStats(path="exact")
            return exact_result(self.ring.tx, q, self.params)
        p = self.ring.partial(q)
        self.stats = QueryStats(p.rings, self.ring.l, p.visits, "rings")
        return make_result(p.candidate, p.strength, p.intrf + self.params.noise, self.params)

    def query_annuli_reference(self, q) -> ApproxQueryResult:
        q = (float(q[0]), float(q[1]))
        if not self._check():
            return exact_result(self.ring.tx, q, self.params)
        p = self.ring.partial_annuli(q)
        return make_result(p.candidate, p.strength, p.intrf + self.params.noise, self.params)
