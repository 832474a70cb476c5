from hsgfs.optimizer.baselines import (
    BpsoConfig,
    bgsa_run,
    bgsa_search,
    bpso_run,
    bpso_search,
    matched_iterations,
)
from hsgfs.optimizer.hsgfs import hsgfs_run, hsgfs_search
from hsgfs.optimizer.memory import MemoryArchive, update_memory
from hsgfs.optimizer.operators import (
    HsgfsConfig,
    Particle,
    acceleration,
    coefficients,
    compute_masses,
    grav_constant,
    init_population,
    local_search,
    particle_distance,
    total_force,
    update_position,
    update_velocity,
)
from hsgfs.optimizer.result import Evaluator, RunResult

__all__ = [
    "BpsoConfig", "Evaluator", "HsgfsConfig", "MemoryArchive", "Particle", "RunResult",
    "acceleration", "bgsa_run", "bgsa_search", "bpso_run", "bpso_search", "coefficients",
    "compute_masses", "grav_constant", "hsgfs_run", "hsgfs_search", "init_population",
    "local_search", "matched_iterations", "particle_distance", "total_force", "update_memory",
    "update_position", "update_velocity",
]
