"""Tabular dataset loading, min-max scaling and stratified holdout splits."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed input data, with the offending location in the message."""


@dataclass(frozen=True)
class Dataset:
    """Labeled samples over which feature subsets are scored.

    ``X`` is a float array of shape (n_samples, n_features) and ``y`` holds
    contiguous class ids ``0..class_count-1``. ``class_names[c]`` is the
    original label string of class ``c``.
    """

    X: np.ndarray
    y: np.ndarray
    class_names: tuple = ()
    feature_names: tuple = ()
    class_count: int = field(default=0)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise DatasetError(f"samples must be a 2-D table, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise DatasetError(f"expected {X.shape[0]} labels, got {y.shape[0] if y.ndim else 0}")
        if X.shape[1] < 1:
            raise DatasetError("dataset needs at least one feature")
        if X.shape[0] < 2:
            raise DatasetError("dataset needs at least two samples")
        class_count = self.class_count or (int(y.max()) + 1 if y.size else 0)
        if y.size and (y.min() < 0 or y.max() >= class_count):
            raise DatasetError("class ids must lie in 0..class_count-1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "class_count", class_count)
        if not self.class_names:
            object.__setattr__(self, "class_names", tuple(str(c) for c in range(class_count)))
        if not self.feature_names:
            object.__setattr__(self, "feature_names", tuple(f"f{i}" for i in range(X.shape[1])))

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, rows: Sequence[int]) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.X[rows], self.y[rows], self.class_names, self.feature_names, self.class_count)


@dataclass(frozen=True)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    train_rows: tuple = ()
    test_rows: tuple = ()


def load_csv(path: Union[str, Path], label_column: Union[int, str] = -1) -> Dataset:
    """Read a comma-separated file with a header row into a :class:`Dataset`.

    ``label_column`` is a header name or a column index (negative indices count
    from the end). Labels are remapped to contiguous ids in order of first
    appearance; the original strings are kept in ``class_names``.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"{path}: no such file")
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh)]
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise DatasetError(f"{path}: need a header and at least one data row")
    header = [h.strip() for h in rows[0]]
    width = len(header)

    if isinstance(label_column, str) and (
        label_column in header or not label_column.lstrip("-").isdigit()
    ):
        if label_column not in header:
            raise DatasetError(f"{path}: label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
    else:
        label_idx = int(label_column)
        if not -width <= label_idx < width:
            raise DatasetError(f"{path}: label column index {label_idx} out of range for {width} columns")
        label_idx %= width
    if width < 2:
        raise DatasetError(f"{path}: need at least one feature column besides the label")

    features, raw_labels = [], []
    # line numbers are 1-based and count the header as line 1
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise DatasetError(
                f"{path}: ragged row at line {line_no}: {len(row)} cells, header has {width}"
            )
        values = []
        for col, cell in enumerate(row):
            if col == label_idx:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise DatasetError(
                    f"{path}: non-numeric value {cell!r} at line {line_no}, column {col + 1} ({header[col]})"
                ) from None
        features.append(values)
        raw_labels.append(row[label_idx].strip())

    names: dict[str, int] = {}
    y = [names.setdefault(lab, len(names)) for lab in raw_labels]
    if len(names) < 2:
        raise DatasetError(f"{path}: label column {header[label_idx]!r} has fewer than 2 classes")
    if len(features) < 2:
        raise DatasetError(f"{path}: need at least two data rows")
    feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
    return Dataset(np.array(features, dtype=float), np.array(y), tuple(names), feature_names, len(names))


def save_csv(d: Dataset, path: Union[str, Path], label_name: str = "label") -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*d.feature_names, label_name])
        for row, label in zip(d.X, d.y):
            writer.writerow([*(repr(float(v)) for v in row), d.class_names[label]])


def min_max_normalize(d: Dataset, reference: Optional[Dataset] = None) -> Dataset:
    """Rescale every column to [0, 1]; constant columns become all zeros.

    With ``reference`` given, column ranges are taken from it instead of ``d``
    (used to scale a test half with training statistics).
    """
    src = d if reference is None else reference
    lo = src.X.min(axis=0)
    span = src.X.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (d.X - lo) / safe, 0.0)
    if reference is None:
        # guard against 1-ulp overshoot at the column maxima
        scaled = np.clip(scaled, 0.0, 1.0)
    return Dataset(scaled, d.y, d.class_names, d.feature_names, d.class_count)


def normalize_split(split: SplitPair) -> SplitPair:
    """Scale both halves with the training half's column ranges."""
    return SplitPair(
        min_max_normalize(split.train),
        min_max_normalize(split.test, reference=split.train),
        split.seed,
        split.train_rows,
        split.test_rows,
    )


def stratified_split(d: Dataset, train_fraction: float, seed: int) -> SplitPair:
    """Per-class shuffled holdout split.

    Each class of size ``s`` sends ``floor(train_fraction * s + 0.5)`` rows to
    train, clamped so both halves keep at least one row of that class. Row
    order inside each half follows the source order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_rows, test_rows = [], []
    for c in range(d.class_count):
        members = np.flatnonzero(d.y == c)
        if members.size == 0:
            continue
        if members.size < 2:
            raise DatasetError(f"class {d.class_names[c]!r} has a single sample; cannot stratify")
        n_train = int(np.floor(train_fraction * members.size + 0.5))
        n_train = min(max(n_train, 1), members.size - 1)
        shuffled = rng.permutation(members)
        train_rows.append(shuffled[:n_train])
        test_rows.append(shuffled[n_train:])
    train = np.sort(np.concatenate(train_rows))
    test = np.sort(np.concatenate(test_rows))
    return SplitPair(
        d.subset(train), d.subset(test), int(seed), tuple(train.tolist()), tuple(test.tolist())
    )
