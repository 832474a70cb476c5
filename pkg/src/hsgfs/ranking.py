"""Offline filter ranking: per-feature mutual information with the class label."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hsgfs.dataset import Dataset


@dataclass(frozen=True)
class FeatureRanking:
    """Feature indices ordered best first, with the score of each feature.

    ``scores`` is indexed by feature, not by rank.
    """

    order: np.ndarray
    scores: np.ndarray

    @property
    def n_features(self) -> int:
        return self.order.size

    def top(self, k: int) -> np.ndarray:
        return self.order[:k]

    def rank_of(self) -> np.ndarray:
        """Inverse permutation: ``rank_of()[f]`` is the 0-based rank of feature ``f``."""
        ranks = np.empty_like(self.order)
        ranks[self.order] = np.arange(self.order.size)
        return ranks

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "feature", "score"])
            for rank, f in enumerate(self.order):
                w.writerow([rank, int(f), f"{self.scores[f]:.10f}"])


def bin_column(x: np.ndarray, bins: int) -> np.ndarray:
    """Equal-width bin ids ``0..bins-1`` over the observed range of ``x``."""
    lo, hi = x.min(), x.max()
    if hi <= lo:
        return np.zeros(x.shape, dtype=np.int64)
    ids = np.floor((x - lo) / (hi - lo) * bins).astype(np.int64)
    return np.clip(ids, 0, bins - 1)


def mutual_information(x_bins: np.ndarray, y: np.ndarray, n_bins: int, class_count: int) -> float:
    """Plug-in mutual information (nats) between two discrete variables."""
    joint = np.zeros((n_bins, class_count))
    np.add.at(joint, (x_bins, y), 1.0)
    joint /= joint.sum()
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / (px @ py)[nz])))
    return max(mi, 0.0)


def rank_features(train: Dataset, bins: int = 10) -> FeatureRanking:
    """Rank features by binned mutual information with the label, best first.

    Equal scores keep the lower feature index first.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    scores = np.array([
        mutual_information(bin_column(train.X[:, f], bins), train.y, bins, train.class_count)
        for f in range(train.n_features)
    ])
    # lexsort: last key is primary
    order = np.lexsort((np.arange(scores.size), -scores))
    return FeatureRanking(order, scores)
