from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from hsgfs.classifier import FitnessFn, FitnessValue


@dataclass
class RunResult:
    """Outcome of one optimizer run."""

    algorithm: str
    best_position: np.ndarray
    best_fitness: FitnessValue
    convergence: list[float]
    seed: int
    wall_time: float
    evaluations: int

    @property
    def n_selected(self) -> int:
        return int(np.count_nonzero(self.best_position))

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "best_position": [int(b) for b in self.best_position],
            "accuracy": self.best_fitness.accuracy,
            "n_selected": self.n_selected,
            "convergence": list(self.convergence),
            "evaluations": self.evaluations,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunResult":
        pos = np.array(d["best_position"], dtype=bool)
        return cls(d["algorithm"], pos, FitnessValue(d["accuracy"], int(pos.sum())),
                   list(d["convergence"]), d["seed"], d["wall_time"], d["evaluations"])


class Evaluator:
    """Counts fitness calls and evaluates batches, optionally on a thread pool.

    Batch results always come back in input order, so the worker count never
    changes a run's outcome.
    """

    def __init__(self, fitness_fn: FitnessFn, workers: int = 1):
        self.fitness_fn = fitness_fn
        self.workers = max(1, int(workers))
        self.calls = 0
        self._pool: Optional[ThreadPoolExecutor] = None
        self.started = time.perf_counter()

    def __call__(self, mask) -> FitnessValue:
        self.calls += 1
        return self.fitness_fn(mask)

    def batch(self, masks: Sequence[np.ndarray]) -> list[FitnessValue]:
        self.calls += len(masks)
        if self.workers == 1 or len(masks) < 2:
            return [self.fitness_fn(m) for m in masks]
        if self._pool is None:
            self._pool = ThreadPoolExecutor(self.workers)
        return list(self._pool.map(self.fitness_fn, masks))

    def elapsed(self) -> float:
        return time.perf_counter() - self.started

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
