"""Dynamic range counting over the fixed sector families of ``geometry``.

Static structure, per family f (a = sector key f, b = sector key f+1):

* level 1: points sorted by decreasing a, so "a >= a(q)" is a prefix.  The
  prefix splits into power-of-two aligned blocks (the set bits of its length).
* level 2: inside every aligned level-1 block of size 2**k the points are
  sorted by increasing b, so "b < b(q)" is again a prefix, split the same way
  into aligned segments of size 2**k2.
* level 3: per segment, either the face-key ranks in sorted order (polygon
  counting: one binary search per threshold) or a k-d tree over the lifted
  (face key, height) pairs (pyramid counting and reporting by halfplane).

Prefix remainders shorter than 2**kmin are tested point by point.  All
families and thresholds of one query share the level 1-2 decomposition, so a
query is a handful of vectorized numpy calls.

Dynamization is the logarithmic method: static blocks of geometrically growing
size plus a scan buffer.  Counting is invertible, so deletions insert the dead
slot into a second ("minus") family of blocks that is subtracted; a full
rebuild happens once dead slots exceed half the live ones.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .errors import FamilyMismatch, Malformed
from .geometry import Orientation, Pyramid, Trapezoid, Wedge, lift_heights, orientation, ring_parameters
from .slots import SlotStore


def _ranks(keys: np.ndarray) -> np.ndarray:
    order = np.argsort(keys, axis=1, kind="stable")
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(keys.shape[1])[None, :], axis=1)
    return ranks


def _expand_ranges(starts: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Owner index and position for every element of the ranges [start, start+count)."""
    total = int(counts.sum())
    owner = np.repeat(np.arange(len(counts)), counts)
    offsets = np.cumsum(counts) - counts
    return owner, starts[owner] + np.arange(total) - offsets[owner]


class _SectorLevels:
    """Levels 1 and 2: canonical segments for the sector conditions of one query."""

    def __init__(self, orient: Orientation, xs: np.ndarray, ys: np.ndarray, kmin: int):
        self.orient = orient
        self.kmin = kmin
        l = orient.l
        n = len(xs)
        self.n = n
        a = orient.sector_keys(xs, ys)
        b = np.roll(a, -1, axis=0)
        self.b = b
        self.a_asc = np.sort(a, axis=1)
        self.b_asc = np.sort(b, axis=1)
        self.o1 = np.argsort(-a, axis=1, kind="stable")
        rank_b = _ranks(b)
        self.K = n.bit_length() - 1
        self.perm = {}
        self.bkey = {}
        fam = np.arange(l)[:, None]
        for k in range(kmin, self.K + 1):
            nfull = (n >> k) << k
            idx = self.o1[:, :nfull]
            blk = (np.arange(nfull) >> k)[None, :]
            o2 = np.argsort(blk * n + rank_b[fam, idx], axis=1, kind="stable")
            perm = np.take_along_axis(idx, o2, axis=1)
            self.perm[k] = perm
            nblocks = nfull >> k
            self.bkey[k] = ((fam * nblocks + blk) * n + rank_b[fam, perm]).ravel()

    def decompose(self, kq: np.ndarray):
        """Return (segments, leftover) for sector keys ``kq`` of the query point.

        segments: list of (k, k2, F, seg) with seg the segment index inside the
        (k, k2) layer of family F; leftover: (F, point index) of prefix remainders.
        """
        l, n, kmin = self.orient.l, self.n, self.kmin
        A = kq
        B = np.roll(kq, -1)
        p1 = n - np.array([np.searchsorted(self.a_asc[f], A[f], "left") for f in range(l)])
        rb = np.array([np.searchsorted(self.b_asc[f], B[f], "left") for f in range(l)])
        left_f, left_p = [], []
        lo = (p1 >> kmin) << kmin
        F, pos = _expand_ranges(lo, p1 - lo)
        pts = self.o1[F, pos]
        keep = self.b[F, pts] < B[F]
        left_f.append(F[keep])
        left_p.append(pts[keep])
        segments = []
        for k in range(kmin, self.K + 1):
            F = np.flatnonzero((p1 >> k) & 1)
            if len(F) == 0:
                continue
            j = (p1[F] >> (k + 1)) << 1
            nfull = (n >> k) << k
            nblocks = nfull >> k
            start = F * nfull + j * (1 << k)
            p2 = np.searchsorted(self.bkey[k], (F * nblocks + j) * n + rb[F], "left") - start
            lo2 = (p2 >> kmin) << kmin
            owner, pos = _expand_ranges(lo2, p2 - lo2)
            left_f.append(F[owner])
            left_p.append(self.perm[k][F[owner], j[owner] * (1 << k) + pos])
            for k2 in range(kmin, k + 1):
                sel = np.flatnonzero((p2 >> k2) & 1)
                if len(sel) == 0:
                    continue
                st = (p2[sel] >> (k2 + 1)) << (k2 + 1)
                seg = (j[sel] * (1 << k) + st) >> k2
                segments.append((k, k2, F[sel], seg))
        return segments, (np.concatenate(left_f), np.concatenate(left_p))


class StaticTrapezoids:
    """Static per-family open-polygon counter over a fixed point set."""

    def __init__(self, orient: Orientation, xs, ys, kmin: int = 4):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        self.lv = _SectorLevels(orient, xs, ys, kmin)
        n, l = len(xs), orient.l
        self.n = n
        face = orient.face_keys(xs, ys)
        self.c_asc = np.sort(face, axis=1)
        self.rank_c = _ranks(face)
        fam = np.arange(l)[:, None]
        chunks, self.gbase, self.gpos = [], {}, {}
        nseg_total = pos_total = 0
        for k, perm in self.lv.perm.items():
            nfull = perm.shape[1]
            pos = np.arange(nfull)[None, :]
            for k2 in range(kmin, k + 1):
                nseg = nfull >> k2
                rc = self.rank_c[fam, perm]
                o = np.argsort((pos >> k2) * n + rc, axis=1, kind="stable")
                rc = np.take_along_axis(rc, o, axis=1)
                self.gbase[k, k2] = nseg_total
                self.gpos[k, k2] = pos_total
                chunks.append(((nseg_total + fam * nseg + (pos >> k2)) * n + rc).ravel())
                nseg_total += l * nseg
                pos_total += l * nfull
        self.G = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)

    def count(self, kq: np.ndarray, thresholds: np.ndarray) -> tuple[np.ndarray, int]:
        """Per-family counts of points with face key < thresholds[f, t] inside sector f.

        ``thresholds`` has shape (l, m) and must be nondecreasing along axis 1.
        Returns the (l, m) counts and the number of nodes and search steps visited.
        """
        l, m = thresholds.shape
        n = self.n
        out = np.zeros((l, m), dtype=np.int64)
        if n == 0:
            return out, 0
        rc = np.stack([np.searchsorted(self.c_asc[f], thresholds[f], "left") for f in range(l)])
        segments, (LF, LP) = self.lv.decompose(kq)
        visits = 0
        if segments:
            gseg, gstart, fams, k2s = [], [], [], []
            for k, k2, F, seg in segments:
                nfull = n >> k << k
                gseg.append(self.gbase[k, k2] + F * (nfull >> k2) + seg)
                gstart.append(self.gpos[k, k2] + F * nfull + seg * (1 << k2))
                fams.append(F)
                k2s.append(np.full(len(F), k2))
            gseg = np.concatenate(gseg)
            gstart = np.concatenate(gstart)
            fams = np.concatenate(fams)
            k2s = np.concatenate(k2s)
            size = np.int64(1) << k2s
            # thresholds at or below a segment's smallest rank count nothing, those
            # above its largest count the whole segment; only the rest are searched
            lo = self.G[gstart] - gseg * n
            hi = self.G[gstart + size - 1] - gseg * n
            keys = (np.arange(l)[:, None] * (n + 1) + rc).ravel()
            a = np.searchsorted(keys, fams * (n + 1) + lo, "right") - fams * m
            b = np.searchsorted(keys, fams * (n + 1) + hi, "right") - fams * m
            full = np.zeros((l, m + 1), dtype=np.int64)
            np.add.at(full, (fams, b), size)
            out += np.cumsum(full, axis=1)[:, :m]
            owner, t = _expand_ranges(a, b - a)
            cnt = np.searchsorted(self.G, gseg[owner] * n + rc[fams[owner], t], "left") - gstart[owner]
            np.add.at(out, (fams[owner], t), cnt)
            visits += len(gseg) + int((k2s[owner] + 1).sum())
        if len(LP):
            # bucket every loose point by the first threshold rank exceeding its own
            keys = (np.arange(l)[:, None] * (n + 1) + rc).ravel()
            t0 = np.searchsorted(keys, LF * (n + 1) + self.rank_c[LF, LP], "right") - LF * m
            hist = np.bincount(LF * (m + 1) + t0, minlength=l * (m + 1)).reshape(l, m + 1)
            out += np.cumsum(hist, axis=1)[:, :m]
            visits += len(LP) * m.bit_length()
        return out, visits


LEAF = 16


class StaticWedges:
    """Static per-family closed-pyramid counter/reporter over lifted points."""

    def __init__(self, orient: Orientation, xs, ys, hs, kmin: int = 5):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        self.h = np.asarray(hs, dtype=float)
        self.lv = _SectorLevels(orient, xs, ys, kmin)
        self.orient = orient
        n, l = len(xs), orient.l
        self.n = n
        self.face = orient.face_keys(xs, ys)
        rank_w = _ranks(self.face)
        rank_h = np.argsort(np.argsort(self.h, kind="stable"), kind="stable")
        fam = np.arange(l)[:, None]
        perms, boxes, child, start, size, nfam = [], [], [], [], [], []
        self.root_base = {}
        node_total = pos_total = 0
        for k, perm in self.lv.perm.items():
            nfull = perm.shape[1]
            pos = np.arange(nfull)[None, :]
            for k2 in range(kmin, k + 1):
                depth = k2 - LEAF.bit_length() + 1
                p = perm
                level_nodes = []
                for t in range(depth + 1):
                    gsize = 1 << (k2 - t)
                    if t < depth:
                        rank = rank_w[fam, p] if t % 2 == 0 else rank_h[p]
                        o = np.argsort((pos >> (k2 - t)) * n + rank, axis=1, kind="stable")
                        p = np.take_along_axis(p, o, axis=1)
                    level_nodes.append(gsize)
                ng0 = nfull >> k2
                self.root_base[k, k2] = node_total
                w = self.face[fam, p]
                hh = self.h[p]
                for t, gsize in enumerate(level_nodes):
                    ng = nfull // gsize
                    wr = w.reshape(l, ng, gsize)
                    hr = hh.reshape(l, ng, gsize)
                    boxes.append(np.stack([wr.min(2), wr.max(2), hr.min(2), hr.max(2)], axis=-1).reshape(-1, 4))
                    cnt = l * ng
                    g = np.arange(cnt)
                    if t < depth:
                        child.append(node_total + cnt + 2 * g)
                    else:
                        child.append(np.full(cnt, -1, dtype=np.int64))
                    fi = g // ng
                    start.append(pos_total + fi * nfull + (g % ng) * gsize)
                    size.append(np.full(cnt, gsize, dtype=np.int64))
                    nfam.append(fi)
                    node_total += cnt
                perms.append(p.ravel())
                pos_total += l * nfull
        if perms:
            self.P = np.concatenate(perms)
            self.box = np.concatenate(boxes)
            self.child = np.concatenate(child)
            self.start = np.concatenate(start)
            self.size = np.concatenate(size)
            self.fam = np.concatenate(nfam).astype(np.int64)
        else:
            self.P = self.child = self.start = self.size = self.fam = np.zeros(0, dtype=np.int64)
            self.box = np.zeros((0, 4))

    def _roots(self, segments):
        n = self.n
        roots = [self.root_base[k, k2] + F * ((n >> k << k) >> k2) + seg for k, k2, F, seg in segments]
        return np.concatenate(roots) if roots else np.zeros(0, dtype=np.int64)

    def count(self, kq, fq, rhos: np.ndarray) -> tuple[np.ndarray, int]:
        """Per-family counts (l, m) of lifted points inside-or-on pyramid P(rhos[t])."""
        l, m = self.orient.l, len(rhos)
        cos = self.orient.cos_half
        out = np.zeros((l, m), dtype=np.int64)
        if self.n == 0:
            return out, 0
        segments, (LF, LP) = self.lv.decompose(kq)
        roots = self._roots(segments)
        # per root, thresholds small enough to hold the whole box count it in full,
        # large ones miss it; the sorted band in between descends the tree
        order = np.argsort(rhos, kind="stable")
        rs = rhos[order]
        f = self.fam[roots]
        bx = self.box[roots]
        dmax = bx[:, 1] - fq[f]
        dmin = bx[:, 0] - fq[f]
        with np.errstate(divide="ignore"):
            A = np.where(dmax > 0, bx[:, 2] * cos / np.where(dmax > 0, dmax, 1), np.inf)
            B = np.where(dmin > 0, bx[:, 3] * cos / np.where(dmin > 0, dmin, 1), np.inf)
        a = np.searchsorted(rs, A * (1 - 1e-9), "right")
        b = np.searchsorted(rs, B * (1 + 1e-9), "right")
        full = np.zeros((l, m + 1), dtype=np.int64)
        np.add.at(full, (f, 0), self.size[roots])
        np.add.at(full, (f, a), -self.size[roots])
        out[:, order] += np.cumsum(full, axis=1)[:, :m]
        owner, si = _expand_ranges(a, b - a)
        node = roots[owner]
        ti = order[si]
        visits = len(roots)
        while len(node):
            visits += len(node)
            f = self.fam[node]
            wq = fq[f]
            rho = rhos[ti]
            bx = self.box[node]
            inside = rho * (bx[:, 1] - wq) <= bx[:, 2] * cos
            outside = rho * (bx[:, 0] - wq) > bx[:, 3] * cos
            np.add.at(out, (f[inside], ti[inside]), self.size[node[inside]])
            cross = ~(inside | outside)
            ch = self.child[node]
            leaf = cross & (ch < 0)
            if leaf.any():
                ln, lt, lf = node[leaf], ti[leaf], f[leaf]
                pos = self.start[ln][:, None] + np.arange(LEAF)[None, :]
                pts = self.P[pos]
                hit = rhos[lt][:, None] * (self.face[lf[:, None], pts] - fq[lf][:, None]) <= self.h[pts] * cos
                np.add.at(out, (lf, lt), hit.sum(axis=1))
                visits += hit.size
            inner = cross & (ch >= 0)
            c0 = ch[inner]
            node = np.concatenate([c0, c0 + 1])
            ti = np.concatenate([ti[inner], ti[inner]])
        if len(LP):
            hit = rhos[None, :] * (self.face[LF, LP] - fq[LF])[:, None] <= (self.h[LP] * cos)[:, None]
            np.add.at(out, LF, hit.astype(np.int64))
            visits += hit.size
        return out, visits

    def report(self, kq, fq, rho: float) -> tuple[np.ndarray, int]:
        """Local point indices inside-or-on P(rho), and nodes visited."""
        cos = self.orient.cos_half
        if self.n == 0:
            return np.zeros(0, dtype=np.int64), 0
        segments, (LF, LP) = self.lv.decompose(kq)
        node = self._roots(segments)
        found = []
        visits = 0
        while len(node):
            visits += len(node)
            f = self.fam[node]
            wq = fq[f]
            bx = self.box[node]
            inside = rho * (bx[:, 1] - wq) <= bx[:, 2] * cos
            outside = rho * (bx[:, 0] - wq) > bx[:, 3] * cos
            if inside.any():
                _, pos = _expand_ranges(self.start[node[inside]], self.size[node[inside]])
                found.append(self.P[pos])
            cross = ~(inside | outside)
            ch = self.child[node]
            leaf = cross & (ch < 0)
            if leaf.any():
                lf = f[leaf]
                pos = self.start[node[leaf]][:, None] + np.arange(LEAF)[None, :]
                pts = self.P[pos]
                hit = rho * (self.face[lf[:, None], pts] - fq[lf][:, None]) <= self.h[pts] * cos
                found.append(pts[hit])
                visits += hit.size
            c0 = ch[cross & (ch >= 0)]
            node = np.concatenate([c0, c0 + 1])
        if len(LP):
            hit = rho * (self.face[LF, LP] - fq[LF]) <= self.h[LP] * cos
            found.append(LP[hit])
            visits += len(LP)
        res = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
        return res, visits


class _LogMethod:
    """Binary-counter collection of static blocks over slot sets plus a scan buffer."""

    def __init__(self, build, buffer_size: int):
        self.build = build
        self.buffer_size = buffer_size
        self.blocks: list = []
        self.buffer: list[int] = []

    def reset(self, slots: np.ndarray) -> None:
        self.buffer = []
        self.blocks = []
        if len(slots) == 0:
            return
        level = 0
        while self.buffer_size << level < len(slots):
            level += 1
        self.blocks = [None] * level + [(slots, self.build(slots))]

    def add(self, slot: int) -> None:
        self.buffer.append(slot)
        if len(self.buffer) < self.buffer_size:
            return
        merged = [np.array(self.buffer, dtype=np.int64)]
        self.buffer = []
        i = 0
        while i < len(self.blocks) and self.blocks[i] is not None:
            merged.append(self.blocks[i][0])
            self.blocks[i] = None
            i += 1
        slots = np.concatenate(merged)
        if i == len(self.blocks):
            self.blocks.append(None)
        self.blocks[i] = (slots, self.build(slots))

    def built(self):
        return [b for b in self.blocks if b is not None]


class _DynamicSectorCounter:
    columns = ("x", "y")

    def __init__(self, l: int, buffer_size: int, kmin: int):
        self.l = l
        self.orient = orientation(l)
        self.kmin = kmin
        self.store = SlotStore(self.columns)
        self.plus = _LogMethod(self._build, buffer_size)
        self.minus = _LogMethod(self._build, buffer_size)
        self.at = defaultdict(list)
        self.dead = 0
        self.rebuilds = 0
        self.last_visits = 0

    def __len__(self) -> int:
        return len(self.store)

    def __contains__(self, pid) -> bool:
        return pid in self.store

    def _insert(self, pid: int, **values) -> None:
        s = self.store.add(pid, **values)
        self.at[values["x"], values["y"]].append(s)
        self.plus.add(s)

    def delete(self, pid: int) -> None:
        s = self.store.remove(pid)
        key = (self.store.data["x"][s], self.store.data["y"][s])
        self.at[key].remove(s)
        if not self.at[key]:
            del self.at[key]
        if s in self.plus.buffer:
            self.plus.buffer.remove(s)
            return
        self.minus.add(s)
        self.dead += 1
        if self.dead > len(self.store) / 2:
            self.rebuild()

    def rebuild(self) -> None:
        self.plus.reset(self.store.live_slots())
        self.minus.reset(np.zeros(0, dtype=np.int64))
        self.dead = 0
        self.rebuilds += 1

    def _apex(self, q) -> list[int]:
        return self.at.get((float(q[0]), float(q[1])), [])

    def _scan_families(self, q, slots: np.ndarray) -> np.ndarray:
        xs = self.store.data["x"][slots]
        ys = self.store.data["y"][slots]
        fam = self.orient.families(q, xs, ys)
        fam[(xs == q[0]) & (ys == q[1])] = -1
        return fam


class TrapezoidCounter(_DynamicSectorCounter):
    """Dynamic counts of points inside open l-gons (per sector family) about a query."""

    def __init__(self, l: int, points=(), buffer_size: int = 32, kmin: int = 4):
        super().__init__(l, buffer_size, kmin)
        for pid, x, y in points:
            self.store.add(pid, x=float(x), y=float(y))
            self.at[float(x), float(y)].append(self.store.slot_of[pid])
        self.rebuild()

    def _build(self, slots):
        return StaticTrapezoids(self.orient, self.store.data["x"][slots], self.store.data["y"][slots], self.kmin)

    def insert(self, pid: int, x: float, y: float) -> None:
        self._insert(pid, x=float(x), y=float(y))

    def _scan(self, q, slots, fq, thr) -> np.ndarray:
        out = np.zeros(thr.shape, dtype=np.int64)
        if not slots:
            return out
        slots = np.array(slots, dtype=np.int64)
        fam = self._scan_families(q, slots)
        ok = fam >= 0
        f = fam[ok]
        face = self.orient.face_keys(self.store.data["x"][slots[ok]], self.store.data["y"][slots[ok]])
        w = face[f, np.arange(len(f))]
        np.add.at(out, f, (w[:, None] < thr[f]).astype(np.int64))
        return out

    def count_polygons(self, q, radii) -> np.ndarray:
        """(l, m) per-family counts of points strictly inside the polygons of the given
        circumradii; radii must be nondecreasing."""
        q = (float(q[0]), float(q[1]))
        kq, fq = self.orient.query_keys(q)
        thr = self.orient.polygon_thresholds(fq, radii)
        out = self._scan(q, self.plus.buffer, fq, thr) - self._scan(q, self.minus.buffer, fq, thr)
        visits = (len(self.plus.buffer) + len(self.minus.buffer)) * thr.shape[1]
        for sign, lm in ((1, self.plus), (-1, self.minus)):
            for _, st in lm.built():
                c, v = st.count(kq, thr)
                out += sign * c
                visits += v
        apex = len(self._apex(q))
        if apex:
            out[0] += apex * (fq[0] < thr[0])
        self.last_visits = visits
        return out

    def count_trapezoid(self, family: int, trapezoid: Trapezoid) -> int:
        if trapezoid.l != self.l or trapezoid.family != family or not 0 <= family < self.l:
            raise FamilyMismatch(f"trapezoid of family {trapezoid.family}/{trapezoid.l} "
                                 f"queried as family {family}/{self.l}")
        if not trapezoid.r_in < trapezoid.r_out:
            return 0
        c = self.count_polygons(trapezoid.q, [trapezoid.r_in, trapezoid.r_out])[family]
        return int(c[1] - c[0])


class WedgeCounter(_DynamicSectorCounter):
    """Dynamic counts and reports of lifted points (x, y, p^(1/alpha)) in closed pyramids."""

    columns = ("x", "y", "h")

    def __init__(self, l: int, alpha: float, points=(), buffer_size: int = 32, kmin: int = 5):
        super().__init__(l, buffer_size, kmin)
        self.alpha = alpha
        for pid, x, y, p in points:
            h = float(lift_heights([p], alpha)[0])
            self.store.add(pid, x=float(x), y=float(y), h=h)
            self.at[float(x), float(y)].append(self.store.slot_of[pid])
        self.rebuild()

    def _build(self, slots):
        d = self.store.data
        return StaticWedges(self.orient, d["x"][slots], d["y"][slots], d["h"][slots], self.kmin)

    def insert(self, pid: int, x: float, y: float, power: float) -> None:
        h = float(lift_heights([power], self.alpha)[0])
        self._insert(pid, x=float(x), y=float(y), h=h)

    def _scan_hits(self, q, slots, fq, rhos) -> tuple[np.ndarray, np.ndarray]:
        slots = np.array(slots, dtype=np.int64)
        fam = self._scan_families(q, slots)
        ok = fam >= 0
        slots, f = slots[ok], fam[ok]
        d = self.store.data
        face = self.orient.face_keys(d["x"][slots], d["y"][slots])
        w = face[f, np.arange(len(f))]
        hit = rhos[None, :] * (w - fq[f])[:, None] <= (d["h"][slots] * self.orient.cos_half)[:, None]
        return f, hit

    def count_pyramids(self, q, rhos) -> np.ndarray:
        """(l, m) per-family counts of lifted points inside-or-on P(rhos[t])."""
        q = (float(q[0]), float(q[1]))
        rhos = np.asarray(rhos, dtype=float)
        kq, fq = self.orient.query_keys(q)
        out = np.zeros((self.l, len(rhos)), dtype=np.int64)
        visits = 0
        for sign, lm in ((1, self.plus), (-1, self.minus)):
            if lm.buffer:
                f, hit = self._scan_hits(q, lm.buffer, fq, rhos)
                np.add.at(out, f, sign * hit.astype(np.int64))
                visits += len(lm.buffer) * len(rhos)
            for _, st in lm.built():
                c, v = st.count(kq, fq, rhos)
                out += sign * c
                visits += v
        out[0] += len(self._apex(q))
        self.last_visits = visits
        return out

    def count_pyramid(self, q, rho: float) -> int:
        return int(self.count_pyramids(q, [rho]).sum())

    def count_wedge(self, family: int, wedge: Wedge) -> int:
        if wedge.l != self.l or wedge.family != family or not 0 <= family < self.l:
            raise FamilyMismatch(f"wedge of family {wedge.family}/{wedge.l} queried as family {family}/{self.l}")
        return int(self.count_pyramids(wedge.q, [wedge.rho])[family, 0])

    def report_pyramid(self, q, rho: float) -> np.ndarray:
        """Ids of live lifted points inside-or-on P(rho), sorted."""
        q = (float(q[0]), float(q[1]))
        kq, fq = self.orient.query_keys(q)
        rhos = np.array([float(rho)])
        found = [np.array(self._apex(q), dtype=np.int64)]
        visits = 0
        if self.plus.buffer:
            f, hit = self._scan_hits(q, self.plus.buffer, fq, rhos)
            b = np.array(self.plus.buffer, dtype=np.int64)
            fam = self._scan_families(q, b)
            found.append(b[fam >= 0][hit[:, 0]])
            visits += len(b)
        for slots, st in self.plus.built():
            loc, v = st.report(kq, fq, float(rho))
            found.append(slots[loc])
            visits += v
        s = np.concatenate(found)
        s = s[self.store.alive[s]]
        self.last_visits = visits
        return np.sort(self.store.ids[s])


def rc_build(points, eps: float, alpha: float, lifted: bool = False):
    """Counter over ``points`` ((id, x, y) or (id, x, y, power) when lifted)."""
    _, l = ring_parameters(eps, alpha)
    if lifted:
        return WedgeCounter(l, alpha, points)
    return TrapezoidCounter(l, points)
