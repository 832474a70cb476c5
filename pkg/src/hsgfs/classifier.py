"""k-nearest-neighbour wrapper fitness for binary feature masks.

Ties are resolved deterministically: neighbours at equal distance are taken
in training-row order, and a tied vote goes to the lowest class id.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from hsgfs.dataset import Dataset, SplitPair

_CHUNK = 256


@dataclass(frozen=True)
class KnnConfig:
    k: int = 3
    distance: str = "euclidean"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.distance != "euclidean":
            raise ValueError(f"unsupported distance {self.distance!r}; only 'euclidean' is available")


@dataclass(frozen=True)
class FitnessValue:
    """Holdout accuracy in [0, 1] together with the subset size that earned it."""

    accuracy: float
    n_selected: int


FitnessFn = Callable[[np.ndarray], FitnessValue]


def _as_mask(mask, n_features: int) -> np.ndarray:
    mask = np.asarray(mask).astype(bool)
    if mask.shape != (n_features,):
        raise ValueError(f"mask has length {mask.size}, dataset has {n_features} features")
    return mask


def _vote(train_y: np.ndarray, sq_dist: np.ndarray, k: int, class_count: int) -> np.ndarray:
    # stable sort keeps lower training-row index first among equal distances
    nearest = np.argsort(sq_dist, axis=1, kind="stable")[:, :k]
    labels = train_y[nearest]
    counts = np.zeros((labels.shape[0], class_count), dtype=np.int64)
    np.add.at(counts, (np.arange(labels.shape[0])[:, None], labels), 1)
    return counts.argmax(axis=1)


def predict(train: Dataset, queries: np.ndarray, k: int, mask) -> np.ndarray:
    """Batch k-NN prediction of ``queries`` using only the masked columns."""
    mask = _as_mask(mask, train.n_features)
    if not mask.any():
        raise ValueError("cannot classify with an empty feature mask")
    if k > train.n_samples:
        raise ValueError(f"k={k} exceeds the {train.n_samples} training samples")
    ref = train.X[:, mask]
    queries = np.atleast_2d(np.asarray(queries, dtype=float))[:, mask]
    out = np.empty(queries.shape[0], dtype=np.int64)
    for start in range(0, queries.shape[0], _CHUNK):
        block = queries[start:start + _CHUNK]
        diff = block[:, None, :] - ref[None, :, :]
        sq_dist = np.einsum("qtf,qtf->qt", diff, diff)
        out[start:start + _CHUNK] = _vote(train.y, sq_dist, k, train.class_count)
    return out


def knn_predict(train: Dataset, query: Sequence[float], k: int, mask) -> int:
    """Majority class among the ``k`` training rows nearest to ``query``."""
    return int(predict(train, np.asarray(query, dtype=float)[None, :], k, mask)[0])


def accuracy(predicted: Sequence[int], truth: Sequence[int]) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError(f"length mismatch: {predicted.size} predictions vs {truth.size} labels")
    if truth.size == 0:
        raise ValueError("accuracy of an empty prediction set is undefined")
    return float(np.count_nonzero(predicted == truth)) / truth.size


def wrapper_fitness(mask, split: SplitPair, cfg: KnnConfig) -> FitnessValue:
    """Accuracy of k-NN trained on ``split.train`` and scored on ``split.test``.

    An all-zero mask scores 0 without touching the classifier.
    """
    mask = _as_mask(mask, split.train.n_features)
    n_selected = int(mask.sum())
    if n_selected == 0:
        return FitnessValue(0.0, 0)
    predicted = predict(split.train, split.test.X, cfg.k, mask)
    return FitnessValue(accuracy(predicted, split.test.y), n_selected)


def make_fitness(split: SplitPair, cfg: KnnConfig) -> FitnessFn:
    return partial(wrapper_fitness, split=split, cfg=cfg)
