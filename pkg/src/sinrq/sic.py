"""Successive interference cancellation driven through any dynamic engine.

Engines need ``query``, ``get``, ``insert``, ``delete``, ``__len__`` and
``__contains__``.  Canceled transmitters are deleted between rounds and
re-inserted in reverse order before returning, whatever the outcome.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import RoundLimit, UnknownId
from .model import Classification


class SicStatus(enum.Enum):
    SUCCESS = "SUCCESS"
    FAILURE = "FAILURE"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class SicOutcome:
    status: SicStatus
    rounds: int
    per_round: list = field(default_factory=list)


def default_max_rounds(n: int, alpha: float, beta: float, c: float = 2.0) -> int:
    """ceil(c * alpha * log_beta n): beyond it the next canceled transmitter would sit
    n^c times farther than the first one."""
    if n < 2:
        return 1
    return max(1, math.ceil(c * alpha * math.log(n) / math.log(beta)))


def _run(engine, q, target, max_rounds):
    rounds, removed = [], []
    try:
        for _ in range(max_rounds):
            if len(engine) == 0:
                return None, rounds, removed
            res = engine.query(q)
            rounds.append((res.candidate, res.stilde, res.classification))
            if res.classification is Classification.RECEIVES:
                if res.candidate == target:
                    return SicStatus.SUCCESS, rounds, removed
                t = engine.get(res.candidate)
                engine.delete(t.id)
                removed.append(t)
            elif res.classification is Classification.NO_RECEPTION:
                return SicStatus.FAILURE, rounds, removed
            else:
                return SicStatus.INDETERMINATE, rounds, removed
        return False, rounds, removed
    finally:
        for t in reversed(removed):
            engine.insert(t)


def sic_resolve(engine, q, target: int, max_rounds: int | None = None) -> SicOutcome:
    if target not in engine:
        raise UnknownId(f"unknown target {target}")
    if max_rounds is None:
        p = engine.params
        max_rounds = default_max_rounds(len(engine), p.alpha, p.beta)
    status, rounds, _ = _run(engine, q, target, max_rounds)
    if not status:
        raise RoundLimit(f"target {target} not resolved within {max_rounds} rounds")
    return SicOutcome(status, len(rounds), rounds)


def sic_enumerate(engine, q, max_rounds: int | None = None) -> list[int]:
    """Ids canceled in order until a round is not RECEIVES or the set is exhausted."""
    if max_rounds is None:
        p = engine.params
        max_rounds = default_max_rounds(len(engine), p.alpha, p.beta)
    status, rounds, removed = _run(engine, q, None, max_rounds)
    if status is False:
        raise RoundLimit(f"enumeration not finished within {max_rounds} rounds")
    return [t.id for t in removed]
