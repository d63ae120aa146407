"""Brute-force reference answers; linear scans over an explicit transmitter list."""
from __future__ import annotations

import enum
import math
from typing import Sequence

import numpy as np

from .errors import EmptySet, TooSmall, UnknownId
from .geometry import lift_heights
from .model import INFINITE, Classification, SinrParams, Transmitter, strengths


class Metric(enum.Enum):
    EUCLIDEAN = "EUCLIDEAN"
    WEIGHTED = "WEIGHTED"


def _arrays(S: Sequence[Transmitter]):
    ids = np.array([t.id for t in S], dtype=np.int64)
    xs = np.array([t.x for t in S], dtype=float)
    ys = np.array([t.y for t in S], dtype=float)
    ps = np.array([t.power for t in S], dtype=float)
    return ids, xs, ys, ps


def exact_interference(S: Sequence[Transmitter], q, exclude: int | None, alpha: float) -> float:
    rest = [t for t in S if t.id != exclude]
    if not rest:
        return 0.0
    _, xs, ys, ps = _arrays(rest)
    return math.fsum(strengths(q[0], q[1], xs, ys, ps, alpha))


def strongest_order(S: Sequence[Transmitter], q, alpha: float) -> list[Transmitter]:
    """Transmitters by decreasing strength at q, ties by id."""
    ids, xs, ys, ps = _arrays(S)
    nrg = strengths(q[0], q[1], xs, ys, ps, alpha)
    order = np.lexsort((ids, -nrg))
    return [S[i] for i in order]


def exact_sinr(S: Sequence[Transmitter], q, params: SinrParams) -> tuple[int, float]:
    if not S:
        raise EmptySet("no transmitters")
    ids, xs, ys, ps = _arrays(S)
    nrg = strengths(q[0], q[1], xs, ys, ps, params.alpha)
    best = int(np.lexsort((ids, -nrg))[0])
    denom = math.fsum(np.delete(nrg, best)) + params.noise
    value = INFINITE if denom == 0 else float(nrg[best]) / denom
    return int(ids[best]), value


def exact_nn2(S: Sequence[Transmitter], q, metric: Metric = Metric.EUCLIDEAN,
              alpha: float = 1.0) -> tuple[int, int]:
    if len(S) < 2:
        raise TooSmall("need at least two transmitters")
    ids, xs, ys, ps = _arrays(S)
    d = np.hypot(xs - q[0], ys - q[1])
    if metric is Metric.WEIGHTED:
        d = d / ps ** (1.0 / alpha)
    order = np.lexsort((ids, d))
    return int(ids[order[0]]), int(ids[order[1]])


def exact_range_count(S: Sequence[Transmitter], region, alpha: float | None = None) -> int:
    """Count transmitters (lifted when the region is 3D) satisfying the region predicate."""
    if not S:
        return 0
    _, xs, ys, ps = _arrays(S)
    if getattr(region, "lifted", False):
        if alpha is None:
            raise ValueError("lifted regions need alpha")
        return int(np.count_nonzero(region.contains(xs, ys, lift_heights(ps, alpha))))
    return int(np.count_nonzero(region.contains(xs, ys)))


def exact_sic(S: Sequence[Transmitter], q, target: int, params: SinrParams):
    """Cancel strongest-first; round i succeeds iff its exact sinr >= beta."""
    from .sic import SicOutcome, SicStatus

    if not any(t.id == target for t in S):
        raise UnknownId(f"unknown target {target}")
    order = strongest_order(S, q, params.alpha)
    _, xs, ys, ps = _arrays(order)
    nrg = strengths(q[0], q[1], xs, ys, ps, params.alpha)
    rounds = []
    for i, t in enumerate(order):
        denom = math.fsum(nrg[i + 1:]) + params.noise
        value = INFINITE if denom == 0 else float(nrg[i]) / denom
        ok = value >= params.beta
        rounds.append((t.id, value, Classification.RECEIVES if ok else Classification.NO_RECEPTION))
        if not ok:
            return SicOutcome(SicStatus.FAILURE, len(rounds), rounds)
        if t.id == target:
            return SicOutcome(SicStatus.SUCCESS, len(rounds), rounds)
    raise AssertionError("target not reached")
