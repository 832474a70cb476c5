"""Planted-feature classification data with a known informative subset."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from hsgfs.dataset import Dataset, DatasetError


@dataclass(frozen=True)
class SyntheticSpec:
    """Generator parameters.

    Informative columns are Gaussian around per-class centres drawn with
    spread ``separation``; the label is the nearest centre in the informative
    subspace, replaced by a different random class with probability
    ``noise_rate``. Every other column is uniform on [0, 1).
    """

    n_samples: int = 300
    n_features: int = 50
    n_informative: int = 10
    class_count: int = 2
    noise_rate: float = 0.0
    separation: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.n_informative <= self.n_features:
            raise DatasetError("need 1 <= n_informative <= n_features")
        if self.class_count < 2:
            raise DatasetError("need at least 2 classes")
        if self.n_samples < 2 * self.class_count:
            raise DatasetError("need at least 2 samples per class")
        if not 0.0 <= self.noise_rate < 1.0:
            raise DatasetError("noise_rate must lie in [0, 1)")
        if self.separation <= 0:
            raise DatasetError("separation must be > 0")

    def to_dict(self) -> dict:
        return asdict(self)


def generate_synthetic(spec: SyntheticSpec) -> tuple[Dataset, np.ndarray]:
    """Return the dataset and the boolean mask of its informative columns."""
    rng = np.random.default_rng(spec.seed)
    m, C = spec.n_informative, spec.class_count
    centres = rng.normal(0.0, spec.separation, size=(C, m))
    latent = rng.integers(C, size=spec.n_samples)
    informative = centres[latent] + rng.normal(size=(spec.n_samples, m))

    sq = ((informative[:, None, :] - centres[None, :, :]) ** 2).sum(axis=2)
    y = sq.argmin(axis=1)
    corrupt = rng.random(spec.n_samples) < spec.noise_rate
    shift = rng.integers(1, C, size=spec.n_samples)
    y = np.where(corrupt, (y + shift) % C, y)

    counts = np.bincount(y, minlength=C)
    if counts.min() < 2:
        raise DatasetError(f"seed {spec.seed} produced a class with {counts.min()} samples; "
                           "raise n_samples or separation")

    columns = rng.permutation(spec.n_features)[:m]
    X = rng.random((spec.n_samples, spec.n_features))
    X[:, columns] = informative
    truth = np.zeros(spec.n_features, dtype=bool)
    truth[columns] = True
    return Dataset(X, y, tuple(f"c{c}" for c in range(C)), class_count=C), truth
