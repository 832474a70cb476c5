"""Wrapper feature selection with a hybrid swarm/gravitation search."""

from hsgfs.classifier import FitnessValue, KnnConfig, knn_predict, wrapper_fitness
from hsgfs.dataset import Dataset, DatasetError, SplitPair, load_csv, min_max_normalize, stratified_split
from hsgfs.optimizer import BpsoConfig, HsgfsConfig, RunResult, bgsa_run, bpso_run, hsgfs_run
from hsgfs.ranking import FeatureRanking, rank_features

__version__ = "0.1.0"

__all__ = [
    "BpsoConfig", "Dataset", "DatasetError", "FeatureRanking", "FitnessValue", "HsgfsConfig", "KnnConfig",
    "RunResult", "SplitPair", "bgsa_run", "bpso_run", "hsgfs_run", "knn_predict", "load_csv",
    "min_max_normalize", "rank_features", "stratified_split", "wrapper_fitness",
]
