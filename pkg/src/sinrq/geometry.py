"""Ring and shell geometry around a query point, and the membership predicates.

Every polygon is a regular l-gon about q with a vertex on the upward vertical
ray.  Sector f is bounded by the rays through vertices f and f+1 (counted
counterclockwise from the upward ray); a point belongs to sector f when

    key_f(p) >= key_f(q)  and  key_{f+1}(p) < key_{f+1}(q),   key_k(p) = cross(v_k, p)

so each radial edge belongs to the sector counterclockwise of it.  A point
equal to q belongs to sector 0.  Inside a sector the polygon of circumradius R
is the open halfplane face_f(p) < face_f(q) + R*cos(pi/l), and the lifted
pyramid of parameter rho is the closed halfspace
rho*(face_f(p) - face_f(q)) <= h*cos(pi/l).  The counting structures evaluate
exactly these float expressions, so their counts agree with brute force.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import AssumptionViolated, Malformed


def ring_parameters(eps: float, alpha: float, spread: float = 1.0) -> tuple[float, int]:
    """Band ratio x and polygon side count l.

    ``spread`` is the power ratio allowed inside one class (1 for uniform power);
    the band ratio shrinks to ((1+eps/2)/spread)^(1/alpha).
    """
    base = (1 + eps / 2) / spread
    if not base > 1:
        raise AssumptionViolated(f"power spread {spread} leaves no room for eps={eps}")
    x = base ** (1.0 / alpha)
    l = math.ceil(math.pi / math.sqrt(2 - 2 / math.sqrt(x)))
    return x, l


def lift_heights(powers, alpha: float) -> np.ndarray:
    return np.asarray(powers, dtype=float) ** (1.0 / alpha)


class Orientation:
    """Fixed directions of the l sectors; shared by predicates and structures."""

    def __init__(self, l: int):
        if l < 3:
            raise Malformed(f"need at least 3 sides, got {l}")
        self.l = l
        ang = np.pi / 2 + 2 * np.pi * np.arange(l) / l
        self.vx = np.cos(ang)
        self.vy = np.sin(ang)
        mid = ang + np.pi / l
        self.nx = np.cos(mid)
        self.ny = np.sin(mid)
        self.cos_half = float(np.cos(np.pi / l))

    def sector_keys(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return self.vx[:, None] * ys[None, :] - self.vy[:, None] * xs[None, :]

    def face_keys(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return self.nx[:, None] * xs[None, :] + self.ny[:, None] * ys[None, :]

    def query_keys(self, q) -> tuple[np.ndarray, np.ndarray]:
        qx, qy = np.array([q[0]], dtype=float), np.array([q[1]], dtype=float)
        return self.sector_keys(qx, qy)[:, 0], self.face_keys(qx, qy)[:, 0]

    def families(self, q, xs, ys) -> np.ndarray:
        """Sector index of every point, or -1 for none (only when keys degenerate)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        kq, _ = self.query_keys(q)
        ge = self.sector_keys(xs, ys) >= kq[:, None]
        member = ge & ~np.roll(ge, -1, axis=0)
        fam = np.where(member.any(axis=0), member.argmax(axis=0), -1)
        apex = (xs == q[0]) & (ys == q[1])
        fam[apex] = 0
        return fam

    def polygon_thresholds(self, fq: np.ndarray, radii) -> np.ndarray:
        """Face thresholds of shape (l, len(radii)); inside means face < threshold."""
        return fq[:, None] + np.asarray(radii, dtype=float)[None, :] * self.cos_half

    def polygon_mask(self, q, radius: float, xs, ys) -> np.ndarray:
        """Open polygon membership; q itself is inside whenever radius > 0."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        fam = self.families(q, xs, ys)
        _, fq = self.query_keys(q)
        thr = self.polygon_thresholds(fq, [radius])[:, 0]
        face = self.face_keys(xs, ys)
        ok = fam >= 0
        out = np.zeros(xs.shape, dtype=bool)
        f = fam[ok]
        out[ok] = face[f, np.flatnonzero(ok)] < thr[f]
        return out

    def pyramid_mask(self, q, rho: float, xs, ys, hs) -> np.ndarray:
        """Closed pyramid membership of lifted points (x, y, h)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        hs = np.asarray(hs, dtype=float)
        fam = self.families(q, xs, ys)
        _, fq = self.query_keys(q)
        face = self.face_keys(xs, ys)
        ok = fam >= 0
        out = np.zeros(xs.shape, dtype=bool)
        f = fam[ok]
        idx = np.flatnonzero(ok)
        out[ok] = rho * (face[f, idx] - fq[f]) <= hs[idx] * self.cos_half
        return out


@lru_cache(maxsize=64)
def orientation(l: int) -> Orientation:
    return Orientation(l)


def polygon_contains(q, circumradius: float, l: int, p) -> bool:
    return bool(orientation(l).polygon_mask(q, circumradius, [p[0]], [p[1]])[0])


def polygon_vertices(q, circumradius: float, l: int) -> np.ndarray:
    o = orientation(l)
    return np.column_stack([q[0] + circumradius * o.vx, q[1] + circumradius * o.vy])


def shoelace_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True)
class RingSystem:
    q: tuple
    d1: float
    x: float
    l: int
    m: int
    r: float
    r_prime: float
    circumradii: np.ndarray = field(repr=False)


def build_ring_system(q, d1: float, n: int, params, spread: float = 1.0,
                      check: bool = True) -> RingSystem:
    """Polygons B_0..B_m with circumradii d1*x^(j/2); B_m covers the radius-r disk."""
    if not d1 > 0:
        raise Malformed(f"d1 must be positive, got {d1}")
    if check and not n > 1 / params.eps:
        raise AssumptionViolated(f"n={n} must exceed 1/eps={1 / params.eps:g}")
    x, l = ring_parameters(params.eps, params.alpha, spread)
    r = (2 * spread * n / params.eps) ** (1.0 / params.alpha) * d1
    # smallest m with x^(m/2) >= sqrt(x) * r / d1
    m = max(1, math.ceil(2 * math.log(r / d1) / math.log(x)) + 1)
    while m > 1 and x ** ((m - 1) / 2) >= math.sqrt(x) * r / d1:
        m -= 1
    while x ** (m / 2) < math.sqrt(x) * r / d1:
        m += 1
    radii = d1 * x ** (np.arange(m + 1) / 2)
    return RingSystem(tuple(map(float, q)), float(d1), x, l, m, r, float(radii[-1]), radii)


def annuli_count(n: int, eps: float) -> int:
    """Number of circular annuli of ratio (1+eps/2)^(1/alpha) between |qs1| and r."""
    return math.ceil(math.log(2 * n / eps) / math.log(1 + eps / 2))


@dataclass(frozen=True)
class ShellSystem:
    """Pyramids P(rho_1)..P(rho_m) below a top strength level.

    rhos[j] = top^(1/alpha) * x^(-j/2) is a cone parameter (strength^(1/alpha)),
    so consecutive cones are exactly the ratio-sqrt(x) circles of the ring
    construction in every horizontal cross-section.
    """
    q: tuple
    nrg1: float
    top: float
    e0: float
    e0_prime: float
    x: float
    l: int
    m: int
    alpha: float
    rhos: np.ndarray = field(repr=False)

    @property
    def levels(self) -> np.ndarray:
        return self.rhos ** self.alpha


def build_shell_system(q, nrg1: float, n: int, params, top: float | None = None,
                       check: bool = True) -> ShellSystem:
    """Shell thresholds from ``top`` (default nrg1) down past e0 = (eps/2n)*nrg1."""
    if not nrg1 > 0:
        raise Malformed(f"nrg1 must be positive, got {nrg1}")
    if check and not n > 1 / params.eps:
        raise AssumptionViolated(f"n={n} must exceed 1/eps={1 / params.eps:g}")
    top = nrg1 if top is None else top
    alpha = params.alpha
    x, l = ring_parameters(params.eps, alpha)
    e0 = params.eps / (2 * n) * nrg1
    rho_top = top ** (1.0 / alpha)
    rho_e0 = e0 ** (1.0 / alpha)
    # m - 1 is the smallest j with rho_top * x^(-j/2) <= rho_e0
    j = max(0, math.ceil(2 * math.log(rho_top / rho_e0) / math.log(x)))
    while j > 0 and rho_top * x ** (-(j - 1) / 2) <= rho_e0:
        j -= 1
    while rho_top * x ** (-j / 2) > rho_e0:
        j += 1
    m = j + 1
    rhos = rho_top * x ** (-np.arange(m + 1) / 2)
    return ShellSystem(tuple(map(float, q)), float(nrg1), float(top), e0,
                       float(rhos[-1] ** alpha), x, l, m, alpha, rhos)


def conical_levels(nrg1: float, n: int, eps: float) -> np.ndarray:
    """e_0 = (eps/2n)*nrg1, e_i = (1+eps/2)*e_{i-1} while below nrg1, then e_k = nrg1."""
    levels = [eps / (2 * n) * nrg1]
    while levels[-1] * (1 + eps / 2) < nrg1:
        levels.append(levels[-1] * (1 + eps / 2))
    levels.append(nrg1)
    return np.array(levels)


@dataclass(frozen=True)
class Polygon:
    q: tuple
    circumradius: float
    l: int
    rotation: int = 0

    def contains(self, xs, ys) -> np.ndarray:
        return orientation(self.l).polygon_mask(self.q, self.circumradius, xs, ys)


@dataclass(frozen=True)
class Ring:
    """Open outer polygon minus open inner polygon: inner boundary in, outer out."""
    q: tuple
    r_in: float
    r_out: float
    l: int

    def contains(self, xs, ys) -> np.ndarray:
        o = orientation(self.l)
        return o.polygon_mask(self.q, self.r_out, xs, ys) & ~o.polygon_mask(self.q, self.r_in, xs, ys)


@dataclass(frozen=True)
class Trapezoid:
    q: tuple
    l: int
    family: int
    r_in: float
    r_out: float

    def contains(self, xs, ys) -> np.ndarray:
        o = orientation(self.l)
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        fam = o.families(self.q, xs, ys)
        _, fq = o.query_keys(self.q)
        thr = o.polygon_thresholds(fq, [self.r_in, self.r_out])[self.family]
        face = o.face_keys(xs, ys)[self.family]
        return (fam == self.family) & ~(face < thr[0]) & (face < thr[1])

    def vertices(self) -> np.ndarray:
        o = orientation(self.l)
        f, g = self.family, (self.family + 1) % self.l
        pts = [(self.r_in, f), (self.r_out, f), (self.r_out, g), (self.r_in, g)]
        return np.array([[self.q[0] + r * o.vx[k], self.q[1] + r * o.vy[k]] for r, k in pts])


def trapezoid_decomposition(inner: Polygon, outer: Polygon) -> list[Trapezoid]:
    if inner.l != outer.l or inner.rotation != outer.rotation or tuple(inner.q) != tuple(outer.q):
        raise Malformed("inner and outer polygons must share centre, side count and orientation")
    if not inner.circumradius < outer.circumradius:
        raise Malformed("inner polygon must be smaller than the outer one")
    return [Trapezoid(tuple(outer.q), outer.l, f, inner.circumradius, outer.circumradius)
            for f in range(outer.l)]


@dataclass(frozen=True)
class Pyramid:
    """Closed region of lifted points on or inside the l-pyramid of parameter rho."""
    q: tuple
    rho: float
    l: int

    lifted = True

    def contains(self, xs, ys, hs) -> np.ndarray:
        return orientation(self.l).pyramid_mask(self.q, self.rho, xs, ys, hs)


@dataclass(frozen=True)
class PyramidShell:
    """Inside P(rho_wide) but not inside P(rho_narrow); rho_wide < rho_narrow."""
    q: tuple
    rho_wide: float
    rho_narrow: float
    l: int

    lifted = True

    def contains(self, xs, ys, hs) -> np.ndarray:
        o = orientation(self.l)
        return (o.pyramid_mask(self.q, self.rho_wide, xs, ys, hs)
                & ~o.pyramid_mask(self.q, self.rho_narrow, xs, ys, hs))


@dataclass(frozen=True)
class Wedge:
    q: tuple
    l: int
    family: int
    rho: float

    lifted = True

    def contains(self, xs, ys, hs) -> np.ndarray:
        o = orientation(self.l)
        fam = o.families(self.q, xs, ys)
        return (fam == self.family) & o.pyramid_mask(self.q, self.rho, xs, ys, hs)


def wedge_decomposition(q, rho: float, l: int) -> list[Wedge]:
    if not rho > 0:
        raise Malformed(f"rho must be positive, got {rho}")
    return [Wedge(tuple(map(float, q)), l, f, rho) for f in range(l)]


def in_conical_shell(q, lo: float, hi: float, x: float, y: float, power: float, alpha: float) -> bool:
    """Strength band (lo, hi] written as |qs|*lo^(1/a) < p^(1/a) <= |qs|*hi^(1/a)."""
    d = float(np.hypot(x - q[0], y - q[1]))
    h = power ** (1.0 / alpha)
    return d * lo ** (1.0 / alpha) < h <= d * hi ** (1.0 / alpha)
