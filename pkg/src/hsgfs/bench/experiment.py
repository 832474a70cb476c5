"""Seeded multi-algorithm comparison runs.

Seed splitting: every random stream of an experiment is derived from
``SeedSequence(master_seed, spawn_key=(stream_id, seed))``. Stream 0 drives
the train/test split, so all algorithms at the same seed see the same split;
each algorithm has its own fixed stream id, so adding or removing an
algorithm never changes another algorithm's runs.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from hsgfs.bench.report import ComparisonReport
from hsgfs.bench.synthetic import SyntheticSpec, generate_synthetic
from hsgfs.classifier import KnnConfig
from hsgfs.dataset import Dataset, load_csv, normalize_split, stratified_split
from hsgfs.optimizer import (
    BpsoConfig,
    HsgfsConfig,
    RunResult,
    bgsa_run,
    bpso_run,
    hsgfs_run,
    matched_iterations,
)
from hsgfs.ranking import rank_features

log = logging.getLogger(__name__)

ALGORITHMS = ("hsgfs", "bpso", "bgsa")
STREAM_IDS = {"split": 0, "hsgfs": 1, "bpso": 2, "bgsa": 3}


def child_seed(master_seed: int, stream: str, seed: int) -> int:
    seq = np.random.SeedSequence(master_seed, spawn_key=(STREAM_IDS[stream], seed))
    return int(seq.generate_state(1)[0])


@dataclass(frozen=True)
class ExperimentSpec:
    algorithms: tuple = ALGORITHMS
    seeds: tuple = (0,)
    data: Optional[str] = None
    label_col: str = "-1"
    synthetic: Optional[SyntheticSpec] = None
    knn: KnnConfig = KnnConfig()
    hsgfs: HsgfsConfig = HsgfsConfig()
    train_fraction: float = 2 / 3
    ranking_bins: int = 10
    master_seed: int = 0
    equal_budget: bool = True
    output_dir: str = "results"
    name: str = "report"

    def __post_init__(self):
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithm(s) {sorted(unknown)}; choose from {ALGORITHMS}")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if any(s < 0 for s in self.seeds):
            raise ValueError("seeds must be non-negative integers")
        if (self.data is None) == (self.synthetic is None):
            raise ValueError("exactly one of a data file or a synthetic spec is required")

    def settings(self) -> dict:
        """JSON-safe description of everything that determines the results."""
        return {
            "algorithms": list(self.algorithms),
            "seeds": list(self.seeds),
            "data": self.data,
            "label_col": self.label_col,
            "synthetic": self.synthetic.to_dict() if self.synthetic else None,
            "knn": asdict(self.knn),
            "hsgfs": asdict(self.hsgfs),
            "train_fraction": self.train_fraction,
            "ranking_bins": self.ranking_bins,
            "master_seed": self.master_seed,
            "equal_budget": self.equal_budget,
        }


def load_dataset(spec: ExperimentSpec) -> Dataset:
    if spec.synthetic is not None:
        return generate_synthetic(spec.synthetic)[0]
    return load_csv(spec.data, spec.label_col)


def run_single(spec: ExperimentSpec, dataset: Dataset, algorithm: str, seed: int) -> RunResult:
    """Split, scale, rank and search for one (algorithm, seed) cell."""
    split = normalize_split(stratified_split(dataset, spec.train_fraction, child_seed(spec.master_seed, "split", seed)))
    run_seed = child_seed(spec.master_seed, algorithm, seed)
    cfg = spec.hsgfs
    baseline_iters = matched_iterations(cfg) if spec.equal_budget else cfg.max_iter
    if algorithm == "hsgfs":
        ranking = rank_features(split.train, spec.ranking_bins)
        return hsgfs_run(split, ranking, cfg, spec.knn, run_seed)
    if algorithm == "bpso":
        bcfg = BpsoConfig(pop_size=cfg.pop_size, max_iter=baseline_iters, v_max=cfg.v_max)
        return bpso_run(split, bcfg, spec.knn, run_seed)
    if algorithm == "bgsa":
        return bgsa_run(split, replace(cfg, max_iter=baseline_iters), spec.knn, run_seed)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _cell(args) -> dict:
    spec, dataset, algorithm, seed = args
    try:
        result = run_single(spec, dataset, algorithm, seed)
    except Exception as exc:
        raise RuntimeError(f"{algorithm} (seed {seed}) failed: {exc}") from exc
    row = result.to_dict()
    row.update(seed=seed, run_seed=result.seed, n_features=dataset.n_features,
               fraction_used=result.n_selected / dataset.n_features, external=False)
    log.info("%s seed=%d acc=%.4f n_sel=%d evals=%d", algorithm, seed, result.best_fitness.accuracy,
             result.n_selected, result.evaluations)
    return row


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ComparisonReport:
    """Run every (algorithm, seed) cell; rows come back in spec order whatever ``workers`` is."""
    dataset = load_dataset(spec)
    cells = [(spec, dataset, alg, seed) for alg in spec.algorithms for seed in spec.seeds]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_cell, cells))
    else:
        rows = [_cell(c) for c in cells]
    return ComparisonReport(dataset.n_features, rows, spec.settings())


def write_report(report: ComparisonReport, spec: ExperimentSpec, output_dir: Optional[str] = None) -> dict[str, Path]:
    return report.write(output_dir or spec.output_dir, spec.name)
