"""Engines for a few distinct powers and for a bounded power ratio.

Both keep one ``RingEngine`` per class and combine the per-class answers:
the winner is the strongest class candidate, and the interference estimate is
the sum of the per-class estimates plus the exact strengths of the losing
class candidates.
"""
from __future__ import annotations

import math

from .errors import AssumptionViolated, DuplicateId, EmptySet, RangeViolation, TooSmall, UnknownId
from .model import ApproxQueryResult, SinrParams, Transmitter, make_result
from .uniform import Partial, QueryStats, RingEngine, exact_result


def assemble(parts: list[Partial]) -> tuple[Partial, float]:
    """Winner and total interference (noise excluded) from per-class answers."""
    if not parts:
        raise EmptySet("no transmitters")
    win = min(parts, key=lambda p: (-p.strength, p.candidate))
    total = math.fsum(p.intrf for p in parts) + math.fsum(p.strength for p in parts if p is not win)
    return win, total


class _ClassedEngine:
    def __init__(self, params: SinrParams, strict: bool):
        self.params = params
        self.strict = strict
        self.classes: dict = {}
        self.where: dict[int, object] = {}
        self.stats = QueryStats()

    def __len__(self) -> int:
        return len(self.where)

    def __contains__(self, pid) -> bool:
        return pid in self.where

    def get(self, pid: int) -> Transmitter:
        if pid not in self.where:
            raise UnknownId(f"unknown id {pid}")
        return self.classes[self.where[pid]].tx[pid]

    def transmitters(self) -> list[Transmitter]:
        return [t for key in sorted(self.classes) for t in self.classes[key].tx.values()]

    def _key(self, t: Transmitter):
        raise NotImplementedError

    def _new_class(self, key) -> RingEngine:
        raise NotImplementedError

    def insert(self, t: Transmitter) -> None:
        if t.id in self.where:
            raise DuplicateId(f"id {t.id} already present")
        key = self._key(t)
        if key not in self.classes:
            self.classes[key] = self._new_class(key)
        self.classes[key].insert(t)
        self.where[t.id] = key

    def delete(self, pid: int) -> None:
        key = self.where.pop(pid, None)
        if key is None:
            raise UnknownId(f"unknown id {pid}")
        self.classes[key].delete(pid)
        if len(self.classes[key]) == 0:
            del self.classes[key]

    def _all(self) -> dict:
        return {t.id: t for t in self.transmitters()}

    def query(self, q) -> ApproxQueryResult:
        q = (float(q[0]), float(q[1]))
        n = len(self.where)
        if n == 0:
            raise EmptySet("no transmitters")
        if not (n >= 2 and n > 1 / self.params.eps):
            if self.strict:
                if n < 2:
                    raise TooSmall("need at least two transmitters")
                raise AssumptionViolated(f"n={n} must exceed 1/eps={1 / self.params.eps:g}")
            self.stats = QueryStats(path="exact")
            return exact_result(self._all(), q, self.params)
        parts = [self.classes[key].partial(q) for key in sorted(self.classes)]
        win, total = assemble(parts)
        self.stats = QueryStats(sum(p.rings for p in parts), 0, sum(p.visits for p in parts), "classes")
        return make_result(win.candidate, win.strength, total + self.params.noise, self.params)


class FewPowersEngine(_ClassedEngine):
    """One uniform-power ring engine per distinct power."""

    def __init__(self, params: SinrParams, transmitters=(), strict: bool = True, kmin: int = 4):
        super().__init__(params, strict)
        self.kmin = kmin
        for t in transmitters:
            self.insert(t)

    def _key(self, t: Transmitter) -> float:
        return t.power

    def _new_class(self, key) -> RingEngine:
        return RingEngine(self.params, kmin=self.kmin)


def subrange_count(c: float, eps: float) -> int:
    return max(1, math.ceil(math.log(c) / math.log(1 + eps / 4)))


class BoundedRatioEngine(_ClassedEngine):
    """Powers in [pmin, c*pmin], split into subranges of ratio 1+eps/4.

    Each subrange is a ring engine charging its upper bound as power, with the
    band ratio narrowed to ((1+eps/2)/(1+eps/4))^(1/alpha).
    """

    def __init__(self, params: SinrParams, pmin: float, c: float, transmitters=(),
                 strict: bool = True, kmin: int = 4):
        super().__init__(params, strict)
        if not params.eps < min(1.0, 4 * (params.beta - 1)):
            raise AssumptionViolated(f"eps={params.eps} must be below min(1, 4*(beta-1))")
        if not (pmin > 0 and c >= 1):
            raise AssumptionViolated(f"need pmin > 0 and c >= 1, got {pmin}, {c}")
        self.pmin = pmin
        self.c = c
        self.width = 1 + params.eps / 4
        self.m = subrange_count(c, params.eps) if c > 1 else 1
        self.kmin = kmin
        for t in transmitters:
            self.insert(t)

    def lower(self, k: int) -> float:
        return self.pmin * self.width ** k

    def _key(self, t: Transmitter) -> int:
        p = t.power
        if not self.pmin <= p <= self.c * self.pmin:
            raise RangeViolation(f"power {p} outside [{self.pmin}, {self.c * self.pmin}]")
        k = min(self.m - 1, max(0, int(math.log(p / self.pmin) / math.log(self.width))))
        while k > 0 and p < self.lower(k):
            k -= 1
        while k < self.m - 1 and p >= self.lower(k + 1):
            k += 1
        return k

    def _new_class(self, key: int) -> RingEngine:
        return RingEngine(self.params, spread=self.width, cap=self.lower(key + 1), kmin=self.kmin)
