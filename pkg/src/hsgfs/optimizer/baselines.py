"""Binary PSO and binary GSA reference optimizers.

Both start from the same seeded initial population as the hybrid search, so
runs sharing a seed begin from identical masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from hsgfs.classifier import FitnessFn, FitnessValue, KnnConfig, make_fitness
from hsgfs.dataset import SplitPair
from hsgfs.optimizer.operators import (
    HsgfsConfig,
    acceleration,
    compute_masses,
    flip_probability,
    grav_constant,
    init_population,
    logistic,
    total_force,
)
from hsgfs.optimizer.result import Evaluator, RunResult


@dataclass(frozen=True)
class BpsoConfig:
    pop_size: int = 20
    max_iter: int = 15
    w_start: float = 0.9
    w_end: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    v_max: float = 6.0

    def __post_init__(self):
        if self.pop_size < 2 or self.max_iter < 0 or self.v_max <= 0:
            raise ValueError("invalid BPSO configuration")

    def inertia(self, t: int) -> float:
        if self.max_iter <= 1:
            return self.w_start
        return self.w_start - (self.w_start - self.w_end) * t / (self.max_iter - 1)

    @property
    def evaluation_budget(self) -> int:
        return self.pop_size * (1 + self.max_iter)


def matched_iterations(cfg: HsgfsConfig) -> int:
    """Iterations a one-evaluation-per-particle baseline needs to spend ``cfg``'s budget."""
    return (cfg.evaluation_budget - cfg.pop_size) // cfg.pop_size


def _better(a: FitnessValue, b: FitnessValue) -> bool:
    return a.accuracy > b.accuracy


def _repair(pos: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if not pos.any():
        pos[rng.integers(pos.size)] = True
    return pos


def bpso_velocity(v, x, pbest, gbest, w: float, cfg: BpsoConfig, rng: np.random.Generator) -> np.ndarray:
    r1 = rng.random(v.size)
    r2 = rng.random(v.size)
    x = x.astype(float)
    v = w * v + cfg.c1 * r1 * (pbest - x) + cfg.c2 * r2 * (gbest - x)
    return np.clip(v, -cfg.v_max, cfg.v_max)


def bpso_position(v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Set each bit with probability ``1 / (1 + exp(-v))``."""
    return _repair(rng.random(v.size) < logistic(v), rng)


def bpso_search(fitness_fn: FitnessFn, n_features: int, cfg: BpsoConfig, seed: int,
                workers: int = 1) -> RunResult:
    rng = np.random.default_rng(seed)
    with Evaluator(fitness_fn, workers) as evaluate:
        swarm = init_population(n_features, cfg.pop_size, rng)
        pos = np.array([p.position for p in swarm])
        vel = np.zeros(pos.shape)
        fits = evaluate.batch(list(pos))
        pbest, pbest_fit = pos.copy(), list(fits)
        g = max(range(len(fits)), key=lambda i: (fits[i].accuracy, -i))
        gbest, gbest_fit = pos[g].copy(), fits[g]
        convergence = [gbest_fit.accuracy]

        for t in range(cfg.max_iter):
            w = cfg.inertia(t)
            for j in range(cfg.pop_size):
                vel[j] = bpso_velocity(vel[j], pos[j], pbest[j], gbest, w, cfg, rng)
            for j in range(cfg.pop_size):
                pos[j] = bpso_position(vel[j], rng)
            fits = evaluate.batch(list(pos))
            for j, fit in enumerate(fits):
                if _better(fit, pbest_fit[j]):
                    pbest[j], pbest_fit[j] = pos[j].copy(), fit
                if _better(fit, gbest_fit):
                    gbest, gbest_fit = pos[j].copy(), fit
            convergence.append(gbest_fit.accuracy)

        return RunResult("bpso", gbest, gbest_fit, convergence, int(seed), evaluate.elapsed(), evaluate.calls)


def bpso_run(split: SplitPair, cfg: BpsoConfig = BpsoConfig(), knn: KnnConfig = KnnConfig(),
             seed: int = 0, workers: int = 1, fitness_fn: Optional[FitnessFn] = None) -> RunResult:
    fitness_fn = fitness_fn or make_fitness(split, knn)
    return bpso_search(fitness_fn, split.train.n_features, cfg, seed, workers)


def bgsa_search(fitness_fn: FitnessFn, n_features: int, cfg: HsgfsConfig, seed: int,
                workers: int = 1) -> RunResult:
    """Plain binary GSA: velocity ``r * v + a`` and ``|tanh|`` bit flips.

    No social term, local search or archive; the best mask is a running max.
    """
    rng = np.random.default_rng(seed)
    with Evaluator(fitness_fn, workers) as evaluate:
        swarm = init_population(n_features, cfg.pop_size, rng)
        pos = np.array([p.position for p in swarm])
        vel = np.zeros(pos.shape)
        fits = evaluate.batch(list(pos))
        g = max(range(len(fits)), key=lambda i: (fits[i].accuracy, -i))
        best, best_fit = pos[g].copy(), fits[g]
        convergence = [best_fit.accuracy]

        for t in range(cfg.max_iter):
            _, norm = compute_masses([f.accuracy for f in fits])
            G = grav_constant(t, cfg)
            as_float = pos.astype(float)
            for j in range(cfg.pop_size):
                force = total_force(j, as_float, norm, G, cfg.epsilon, rng)
                accel = acceleration(force, norm[j], cfg.epsilon)
                vel[j] = np.clip(rng.random(n_features) * vel[j] + accel, -cfg.v_max, cfg.v_max)
            for j in range(cfg.pop_size):
                flips = rng.random(n_features) < flip_probability(vel[j])
                pos[j] = _repair(pos[j] ^ flips, rng)
            fits = evaluate.batch(list(pos))
            for j, fit in enumerate(fits):
                if _better(fit, best_fit):
                    best, best_fit = pos[j].copy(), fit
            convergence.append(best_fit.accuracy)

        return RunResult("bgsa", best, best_fit, convergence, int(seed), evaluate.elapsed(), evaluate.calls)


def bgsa_run(split: SplitPair, cfg: HsgfsConfig = HsgfsConfig(), knn: KnnConfig = KnnConfig(),
             seed: int = 0, workers: int = 1, fitness_fn: Optional[FitnessFn] = None) -> RunResult:
    fitness_fn = fitness_fn or make_fitness(split, knn)
    return bgsa_search(fitness_fn, split.train.n_features, cfg, seed, workers)
