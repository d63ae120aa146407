"""Growable columnar storage addressed by slot number; a slot is never reused."""
from __future__ import annotations

import numpy as np

from .errors import DuplicateId, UnknownId


class SlotStore:
    def __init__(self, columns: tuple[str, ...] = ("x", "y")):
        self._cap = 64
        self.columns = columns
        self.data = {c: np.zeros(self._cap) for c in columns}
        self.ids = np.zeros(self._cap, dtype=np.int64)
        self.alive = np.zeros(self._cap, dtype=bool)
        self.size = 0
        self.slot_of: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.slot_of)

    def __contains__(self, pid) -> bool:
        return pid in self.slot_of

    def add(self, pid: int, **values) -> int:
        if pid in self.slot_of:
            raise DuplicateId(f"id {pid} already present")
        if self.size == self._cap:
            self._cap *= 2
            for c in self.columns:
                self.data[c] = np.resize(self.data[c], self._cap)
            self.ids = np.resize(self.ids, self._cap)
            self.alive = np.resize(self.alive, self._cap)
        s = self.size
        for c in self.columns:
            self.data[c][s] = values[c]
        self.ids[s] = pid
        self.alive[s] = True
        self.slot_of[pid] = s
        self.size += 1
        return s

    def remove(self, pid: int) -> int:
        s = self.slot_of.pop(pid, None)
        if s is None:
            raise UnknownId(f"unknown id {pid}")
        self.alive[s] = False
        return s

    def col(self, name: str) -> np.ndarray:
        return self.data[name][: self.size]

    def live_slots(self) -> np.ndarray:
        return np.flatnonzero(self.alive[: self.size])
