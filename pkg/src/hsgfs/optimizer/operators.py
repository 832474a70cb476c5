"""Per-step building blocks of the hybrid swarm/gravitation search.

Positions are boolean arrays of length ``n``; velocities, forces and
accelerations are float arrays of the same length. Every random draw goes
through an explicit ``numpy.random.Generator`` so a run is reproducible from
its seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from hsgfs.classifier import FitnessFn, FitnessValue
from hsgfs.ranking import FeatureRanking


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    fitness: Optional[FitnessValue] = None
    raw_mass: float = 0.0
    norm_mass: float = 0.0

    @property
    def n_selected(self) -> int:
        return int(self.position.sum())


@dataclass(frozen=True)
class HsgfsConfig:
    """Search parameters; defaults follow the 20-particle, 15-iteration regime."""

    pop_size: int = 20
    max_iter: int = 15
    g0: float = 1.0
    alpha: float = 20.0
    epsilon: float = 1e-9
    v_max: float = 6.0
    memory_capacity: Optional[int] = None
    local_search: bool = True

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("pop_size must be >= 2")
        if self.max_iter < 0:
            raise ValueError("max_iter must be >= 0")
        for name in ("g0", "alpha", "epsilon", "v_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.memory_capacity is not None and self.memory_capacity < 1:
            raise ValueError("memory_capacity must be >= 1")

    @property
    def capacity(self) -> int:
        return self.memory_capacity or self.pop_size

    @property
    def evaluation_budget(self) -> int:
        """Upper bound on fitness calls for one run with this config."""
        per_iter = 2 if self.local_search else 1
        return self.pop_size * (1 + per_iter * self.max_iter)


def init_population(n: int, pop_size: int, rng: np.random.Generator) -> list[Particle]:
    """Random Bernoulli(0.5) masks with zero velocity; empty masks get one random bit."""
    if n < 1 or pop_size < 2:
        raise ValueError("need n >= 1 features and pop_size >= 2")
    bits = rng.random((pop_size, n)) < 0.5
    for row in bits:
        if not row.any():
            row[rng.integers(n)] = True
    return [Particle(row.copy(), np.zeros(n)) for row in bits]


def compute_masses(fitnesses) -> tuple[np.ndarray, np.ndarray]:
    """Raw masses scaled between worst (0) and best (1), and their normalised shares.

    When every fitness is equal the raw masses are all 1 and each share is 1/N.
    """
    fit = np.asarray(fitnesses, dtype=float)
    best, worst = fit.max(), fit.min()
    if best == worst:
        return np.ones_like(fit), np.full(fit.size, 1.0 / fit.size)
    raw = (fit - worst) / (best - worst)
    return raw, raw / raw.sum()


def grav_constant(iteration: int, cfg: HsgfsConfig) -> float:
    return cfg.g0 * float(np.exp(-cfg.alpha * iteration / cfg.max_iter)) if cfg.max_iter else cfg.g0


def coefficients(iteration: int, max_iter: int) -> tuple[float, float]:
    """Acceleration weight ``c1`` and social weight ``c2``; they always sum to 2."""
    c2 = 2.0 * (iteration / max_iter) ** 3
    return 2.0 - c2, c2


def particle_distance(a, b) -> float:
    """Euclidean distance of two bit masks, i.e. the root of their Hamming count."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ValueError(f"mask length mismatch: {a.size} vs {b.size}")
    return float(np.sqrt(np.count_nonzero(a != b)))


def total_force(j: int, positions: np.ndarray, masses: np.ndarray, G: float, epsilon: float,
                rng: Optional[np.random.Generator] = None, r: Optional[np.ndarray] = None) -> np.ndarray:
    """Randomly weighted sum of the gravitational pulls on particle ``j``.

    One weight is drawn per other particle, in index order. Pass ``r``
    (length N-1) to pin the weights instead of drawing them.
    """
    positions = np.asarray(positions, dtype=float)
    masses = np.asarray(masses, dtype=float)
    others = np.array([i for i in range(positions.shape[0]) if i != j], dtype=np.int64)
    if r is None:
        r = rng.random(others.size)
    r = np.asarray(r, dtype=float)
    diff = positions[others] - positions[j]
    dist = np.sqrt(np.abs(diff).sum(axis=1))
    pull = r * G * masses[j] * masses[others] / (dist + epsilon)
    return pull @ diff


def acceleration(force, norm_mass: float, epsilon: float) -> np.ndarray:
    return np.asarray(force, dtype=float) / (norm_mass + epsilon)


def update_velocity(p: Particle, accel: np.ndarray, gbest: np.ndarray, iteration: int,
                    cfg: HsgfsConfig, rng: np.random.Generator) -> np.ndarray:
    c1, c2 = coefficients(iteration, cfg.max_iter)
    r = rng.random(p.velocity.size)
    social = gbest.astype(float) - p.position.astype(float)
    v = r * p.velocity + c1 * accel + c2 * social
    return np.clip(v, -cfg.v_max, cfg.v_max)


def flip_probability(v) -> np.ndarray:
    return np.abs(np.tanh(v))


def logistic(v) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.asarray(v, dtype=float)))


def update_position(p: Particle, rng: np.random.Generator, fallback_feature: Optional[int] = None) -> np.ndarray:
    """Complement each bit with probability ``|tanh(v)|``.

    An empty result gets ``fallback_feature`` set, or a random bit when no
    fallback is given.
    """
    flips = rng.random(p.velocity.size) < flip_probability(p.velocity)
    pos = p.position ^ flips
    if not pos.any():
        pos[rng.integers(pos.size) if fallback_feature is None else fallback_feature] = True
    return pos


def local_search_limit(n: int) -> int:
    return (5 * n) // 100


def propose_local_move(position: np.ndarray, ranking: FeatureRanking, rng: np.random.Generator,
                       rank_of: Optional[np.ndarray] = None) -> tuple[np.ndarray, int, int]:
    """Add the top-``k`` ranked features, then drop the ``d`` worst-ranked others.

    ``k`` and ``d`` are drawn uniformly from ``1..floor(5n/100)``. The freshly
    added top features are never dropped, so the result is never empty.
    Returns ``(candidate, k, d)``; with ``n < 20`` nothing is drawn and
    ``(position, 0, 0)`` comes back unchanged.
    """
    limit = local_search_limit(position.size)
    if limit == 0:
        return position.copy(), 0, 0
    k, d = (int(v) for v in rng.integers(1, limit + 1, size=2))
    if rank_of is None:
        rank_of = ranking.rank_of()
    cand = position.copy()
    top = ranking.top(k)
    cand[top] = True
    selected = np.flatnonzero(cand)
    deletable = selected[rank_of[selected] >= k]
    worst_first = deletable[np.argsort(-rank_of[deletable], kind="stable")]
    cand[worst_first[:d]] = False
    return cand, k, d


def local_search(p: Particle, ranking: FeatureRanking, rng: np.random.Generator,
                 fitness_fn: FitnessFn) -> Particle:
    """Greedy filter-guided move: keep the candidate only if it scores at least as well."""
    if p.fitness is None:
        p.fitness = fitness_fn(p.position)
    cand, k, _ = propose_local_move(p.position, ranking, rng)
    if k == 0 or np.array_equal(cand, p.position):
        return p
    fit = fitness_fn(cand)
    if fit.accuracy >= p.fitness.accuracy:
        return Particle(cand, p.velocity, fit, p.raw_mass, p.norm_mass)
    return p
