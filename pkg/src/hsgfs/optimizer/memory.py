"""Bounded archive of the best distinct masks seen during a run."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from hsgfs.classifier import FitnessValue


@dataclass(frozen=True)
class MemoryEntry:
    position: np.ndarray
    fitness: FitnessValue
    seq: int

    def sort_key(self):
        return (-self.fitness.accuracy, self.fitness.n_selected, self.seq)


class MemoryArchive:
    """Keeps at most ``capacity`` unique positions, best first.

    Order is by accuracy (high first), then fewer selected features, then
    earlier insertion.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.entries: list[MemoryEntry] = []
        self._keys: set[bytes] = set()
        self._seq = 0

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, position) -> bool:
        return np.asarray(position, dtype=bool).tobytes() in self._keys

    @property
    def best(self) -> MemoryEntry:
        if not self.entries:
            raise LookupError("memory archive is empty")
        return self.entries[0]

    def insert(self, position, fitness: FitnessValue) -> bool:
        position = np.asarray(position, dtype=bool)
        key = position.tobytes()
        if key in self._keys:
            return False
        self.entries.append(MemoryEntry(position.copy(), fitness, self._seq))
        self._keys.add(key)
        self._seq += 1
        return True

    def update(self, items: Iterable) -> "MemoryArchive":
        """Insert ``(position, fitness)`` pairs or particles, then truncate."""
        for item in items:
            if isinstance(item, tuple):
                self.insert(*item)
            else:
                self.insert(item.position, item.fitness)
        self.entries.sort(key=MemoryEntry.sort_key)
        for dropped in self.entries[self.capacity:]:
            self._keys.discard(dropped.position.tobytes())
        del self.entries[self.capacity:]
        return self


def update_memory(mem: MemoryArchive, particles: Iterable) -> MemoryArchive:
    return mem.update(particles)
