"""Hybrid swarm/gravitation feature-selection search with local search and memory."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from hsgfs.classifier import FitnessFn, KnnConfig, make_fitness
from hsgfs.dataset import SplitPair
from hsgfs.optimizer.memory import MemoryArchive
from hsgfs.optimizer.operators import (
    HsgfsConfig,
    Particle,
    acceleration,
    compute_masses,
    grav_constant,
    init_population,
    propose_local_move,
    total_force,
    update_position,
    update_velocity,
)
from hsgfs.optimizer.result import Evaluator, RunResult
from hsgfs.ranking import FeatureRanking

log = logging.getLogger(__name__)


def hsgfs_search(fitness_fn: FitnessFn, n_features: int, ranking: FeatureRanking, cfg: HsgfsConfig,
                 seed: int, workers: int = 1) -> RunResult:
    """Run the hybrid search against an arbitrary mask-scoring function.

    Each iteration: masses from current fitness, gravitational pulls on the
    pre-move positions, velocity/position update for every particle,
    re-evaluation, greedy ranking-guided local search, memory update. The
    memory's best entry is both the social attractor and the final answer.
    """
    if ranking.n_features != n_features:
        raise ValueError(f"ranking covers {ranking.n_features} features, data has {n_features}")
    rng = np.random.default_rng(seed)
    rank_of = ranking.rank_of()
    top_feature = int(ranking.order[0])
    memory = MemoryArchive(cfg.capacity)

    with Evaluator(fitness_fn, workers) as evaluate:
        swarm = init_population(n_features, cfg.pop_size, rng)
        for p, fit in zip(swarm, evaluate.batch([p.position for p in swarm])):
            p.fitness = fit
        memory.update(swarm)
        convergence = [memory.best.fitness.accuracy]

        for t in range(cfg.max_iter):
            raw, norm = compute_masses([p.fitness.accuracy for p in swarm])
            G = grav_constant(t, cfg)
            gbest = memory.best.position
            positions = np.array([p.position for p in swarm], dtype=float)

            for j, p in enumerate(swarm):
                p.raw_mass, p.norm_mass = float(raw[j]), float(norm[j])
                force = total_force(j, positions, norm, G, cfg.epsilon, rng)
                accel = acceleration(force, norm[j], cfg.epsilon)
                p.velocity = update_velocity(p, accel, gbest, t, cfg, rng)
            for p in swarm:
                p.position = update_position(p, rng, top_feature)
            for p, fit in zip(swarm, evaluate.batch([p.position for p in swarm])):
                p.fitness = fit

            if cfg.local_search:
                _local_search_batch(swarm, ranking, rank_of, rng, evaluate)

            memory.update(swarm)
            convergence.append(memory.best.fitness.accuracy)
            log.debug("iter %d: G=%.3g best=%.4f (%d features)", t, G,
                      memory.best.fitness.accuracy, memory.best.fitness.n_selected)

        best = memory.best
        return RunResult("hsgfs", best.position.copy(), best.fitness, convergence, int(seed),
                         evaluate.elapsed(), evaluate.calls)


def _local_search_batch(swarm: list[Particle], ranking: FeatureRanking, rank_of: np.ndarray,
                        rng: np.random.Generator, evaluate: Evaluator) -> None:
    # draw every move first so the batch evaluation order cannot affect the stream
    moves = []
    for j, p in enumerate(swarm):
        cand, k, _ = propose_local_move(p.position, ranking, rng, rank_of)
        if k and not np.array_equal(cand, p.position):
            moves.append((j, cand))
    fits = evaluate.batch([cand for _, cand in moves])
    for (j, cand), fit in zip(moves, fits):
        if fit.accuracy >= swarm[j].fitness.accuracy:
            swarm[j].position, swarm[j].fitness = cand, fit


def hsgfs_run(split: SplitPair, ranking: FeatureRanking, cfg: HsgfsConfig = HsgfsConfig(),
              knn: KnnConfig = KnnConfig(), seed: int = 0, workers: int = 1,
              fitness_fn: Optional[FitnessFn] = None) -> RunResult:
    """Select features for ``split`` with k-NN holdout accuracy as fitness."""
    fitness_fn = fitness_fn or make_fitness(split, knn)
    return hsgfs_search(fitness_fn, split.train.n_features, ranking, cfg, seed, workers)
