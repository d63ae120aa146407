"""Transmitters, model constants, signal arithmetic and reception classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import Coincident, Malformed

INFINITE = math.inf


@dataclass(frozen=True)
class Transmitter:
    id: int
    x: float
    y: float
    power: float

    def __post_init__(self):
        if not self.power > 0 or not math.isfinite(self.power):
            raise Malformed(f"transmitter {self.id}: power must be positive, got {self.power}")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise Malformed(f"transmitter {self.id}: non-finite coordinates")


@dataclass(frozen=True)
class SinrParams:
    alpha: float
    beta: float
    noise: float
    eps: float

    def __post_init__(self):
        if not self.alpha >= 1:
            raise Malformed(f"alpha must be >= 1, got {self.alpha}")
        if not self.beta > 1:
            raise Malformed(f"beta must be > 1, got {self.beta}")
        if not self.noise >= 0:
            raise Malformed(f"noise must be >= 0, got {self.noise}")
        if not 0 < self.eps < 1:
            raise Malformed(f"eps must lie in (0, 1), got {self.eps}")


class Classification(enum.Enum):
    RECEIVES = "RECEIVES"
    NO_RECEPTION = "NO_RECEPTION"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class ApproxQueryResult:
    candidate: Optional[int]
    stilde: float
    intrf_tilde: float
    classification: Classification


def strengths(qx: float, qy: float, xs, ys, powers, alpha: float) -> np.ndarray:
    """Vectorized p / |q s|^alpha. Every strength in the package goes through here."""
    d = np.hypot(np.asarray(xs, dtype=float) - qx, np.asarray(ys, dtype=float) - qy)
    if np.any(d == 0):
        raise Coincident(f"query point ({qx}, {qy}) coincides with a transmitter")
    return np.asarray(powers, dtype=float) / d ** alpha


def signal_strength(t: Transmitter, q, alpha: float) -> float:
    return float(strengths(q[0], q[1], [t.x], [t.y], [t.power], alpha)[0])


def weighted_distance(q, t: Transmitter, alpha: float) -> float:
    d = float(np.hypot(t.x - q[0], t.y - q[1]))
    return d / t.power ** (1.0 / alpha)


def classify(stilde: float, params: SinrParams) -> Classification:
    if stilde >= (1 + params.eps) * params.beta:
        return Classification.RECEIVES
    if stilde < (1 - params.eps) * params.beta:
        return Classification.NO_RECEPTION
    return Classification.INDETERMINATE


def make_result(candidate: Optional[int], strength: float, intrf_tilde: float,
                params: SinrParams) -> ApproxQueryResult:
    stilde = INFINITE if intrf_tilde == 0 else strength / intrf_tilde
    return ApproxQueryResult(candidate, stilde, intrf_tilde, classify(stilde, params))
