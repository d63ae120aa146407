"""Dynamic exact first/second nearest neighbours by the logarithmic method.

Static blocks are scipy k-d trees; block i holds about ``buffer_size * 2**i``
points.  Inserts go to a small scan buffer that is merged upward like a binary
counter when full.  Deletes mark the point's slot dead; once dead slots exceed
half the live points everything is rebuilt.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import TooSmall
from .slots import SlotStore


@dataclass
class _Block:
    tree: cKDTree
    slots: np.ndarray


class DynamicNN:
    def __init__(self, points=(), buffer_size: int = 32):
        self.buffer_size = buffer_size
        self.store = SlotStore()
        self._buffer: list[int] = []
        self._levels: list[_Block | None] = []
        self._dead_in_blocks = 0
        self.rebuilds = 0
        pts = list(points)
        for pid, x, y in pts:
            self.store.add(pid, x=x, y=y)
        if pts:
            self._rebuild()

    def __len__(self) -> int:
        return len(self.store)

    def __contains__(self, pid) -> bool:
        return pid in self.store

    def _make_block(self, slots: np.ndarray) -> _Block:
        xy = np.column_stack([self.store.col("x")[slots], self.store.col("y")[slots]])
        return _Block(cKDTree(xy), slots)

    def _rebuild(self) -> None:
        live = self.store.live_slots()
        self._buffer = []
        self._levels = []
        self._dead_in_blocks = 0
        self.rebuilds += 1
        if len(live) == 0:
            return
        level = 0
        while self.buffer_size << level < len(live):
            level += 1
        self._levels = [None] * level + [self._make_block(live)]

    def insert(self, pid: int, x: float, y: float) -> None:
        s = self.store.add(pid, x=x, y=y)
        self._buffer.append(s)
        if len(self._buffer) < self.buffer_size:
            return
        merged = [np.array(self._buffer, dtype=np.int64)]
        self._buffer = []
        i = 0
        while i < len(self._levels) and self._levels[i] is not None:
            merged.append(self._levels[i].slots)
            self._levels[i] = None
            i += 1
        slots = np.concatenate(merged)
        alive = self.store.alive[slots]
        self._dead_in_blocks -= int(np.count_nonzero(~alive))
        slots = slots[alive]
        if i == len(self._levels):
            self._levels.append(None)
        self._levels[i] = self._make_block(slots) if len(slots) else None

    def delete(self, pid: int) -> None:
        s = self.store.remove(pid)
        if s in self._buffer:
            self._buffer.remove(s)
            return
        self._dead_in_blocks += 1
        if self._dead_in_blocks > len(self.store) / 2:
            self._rebuild()

    def _block_candidates(self, block: _Block, q) -> np.ndarray:
        size = len(block.slots)
        k = min(size, 4)
        while True:
            d, idx = block.tree.query(q, k=k)
            d = np.atleast_1d(d)
            slots = block.slots[np.atleast_1d(idx)]
            live = self.store.alive[slots]
            if k == size:
                return slots[live]
            dl = d[live]
            # stop once two live points are found and the scan has moved past the second
            if len(dl) >= 2 and d[-1] > dl[1] * (1 + 1e-9):
                return slots[live]
            k = min(size, 2 * k)

    def nearest_two(self, q) -> tuple[int, int]:
        if len(self) < 2:
            raise TooSmall("need at least two points")
        q = (float(q[0]), float(q[1]))
        parts = [np.array(self._buffer, dtype=np.int64)]
        for block in self._levels:
            if block is not None:
                parts.append(self._block_candidates(block, q))
        slots = np.concatenate(parts)
        ids = self.store.ids[slots]
        d = np.hypot(self.store.col("x")[slots] - q[0], self.store.col("y")[slots] - q[1])
        order = np.lexsort((ids, d))
        return int(ids[order[0]]), int(ids[order[1]])
