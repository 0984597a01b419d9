"""Univariate time series datasets: synthetic peaks, UCR files, splits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.model_selection import StratifiedKFold
from sklearn.model_selection import train_test_split as _sk_split

from .errors import (
    EmptyDataset,
    EmptyFile,
    InsufficientSamples,
    RaggedRows,
    StratificationImpossible,
    UnparseableValue,
)

__all__ = [
    "TimeSeriesDataset",
    "SyntheticConfig",
    "peak_shape",
    "generate_synthetic",
    "challenging_pairs",
    "select_challenging_subset",
    "load_ucr_tsv",
    "save_ucr_tsv",
    "train_test_split",
    "stratified_folds",
]


@dataclass(frozen=True)
class TimeSeriesDataset:
    """Labeled univariate series of uniform length.

    ``labels[n]`` indexes into ``class_names``.
    """

    series: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]
    name: str = "dataset"

    def __post_init__(self):
        series = np.ascontiguousarray(self.series, dtype=np.float64)
        if series.ndim == 1 and series.size == 0:
            series = series.reshape(0, 0)
        if series.ndim != 2:
            raise ValueError(f"series must be 2-D, got shape {series.shape}")
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if labels.shape[0] != series.shape[0]:
            raise ValueError("one label per series required")
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.class_names)):
            raise ValueError("label outside class vocabulary")
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", tuple(str(c) for c in self.class_names))

    def __len__(self):
        return self.series.shape[0]

    @property
    def length(self) -> int:
        return self.series.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def subset(self, indices, name: str | None = None) -> "TimeSeriesDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return TimeSeriesDataset(
            self.series[indices],
            self.labels[indices],
            self.class_names,
            self.name if name is None else name,
        )


@dataclass(frozen=True)
class SyntheticConfig:
    length: int = 500
    a: float = 0.03
    noise_mean: float = 0.0
    noise_std: float = 1.0
    seed: int = 0
    name: str = "SyntheticPeak"

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("peak shape parameter a must be positive")
        if self.length < 2:
            raise ValueError("length must be at least 2")


def peak_shape(u, a: float = 0.03):
    """Approximate delta: Gaussian density with variance ``a`` at offset ``u``."""
    u = np.asarray(u, dtype=np.float64)
    return np.exp(-(u**2) / (2.0 * a)) / math.sqrt(2.0 * math.pi * a)


def generate_synthetic(cfg: SyntheticConfig = SyntheticConfig()) -> TimeSeriesDataset:
    """One noisy series per peak position ``c = 1..T``.

    Time steps are 1-based, so the peak of sample ``c`` sits at array
    index ``c - 1``. Samples with ``c <= T/2`` are class "1", the rest "2".
    """
    T = cfg.length
    rng = np.random.default_rng(cfg.seed)
    noise = rng.normal(cfg.noise_mean, cfg.noise_std, size=(T, T))
    t = np.arange(1, T + 1)
    centers = np.arange(1, T + 1)
    peaks = peak_shape(t[None, :] - centers[:, None], cfg.a)
    labels = (centers > T / 2).astype(np.int64)
    return TimeSeriesDataset(noise + peaks, labels, ("1", "2"), cfg.name)


def challenging_pairs(labels, descriptors, n_pairs: int = 125) -> list[tuple[int, int]]:
    """Greedily match the most similar (class 0, class 1) descriptor pairs.

    Similarity is cosine. Each step takes the global maximum of the
    remaining cross-class similarity matrix; ties go to the lowest
    (row, column) position. Returns ``(i, j)`` sample index pairs in
    selection order.
    """
    labels = np.asarray(labels)
    first = np.flatnonzero(labels == 0)
    second = np.flatnonzero(labels == 1)
    if len(first) < n_pairs or len(second) < n_pairs:
        raise InsufficientSamples(
            f"need {n_pairs} samples per class, have {len(first)} and {len(second)}"
        )
    Y = np.asarray(descriptors, dtype=np.float64)
    norms = np.linalg.norm(Y, axis=1)
    norms[norms == 0] = 1.0
    Yn = Y / norms[:, None]
    sim = Yn[first] @ Yn[second].T

    pairs = []
    for _ in range(n_pairs):
        r, c = np.unravel_index(np.argmax(sim), sim.shape)
        pairs.append((int(first[r]), int(second[c])))
        sim[r, :] = -np.inf
        sim[:, c] = -np.inf
    return pairs


def select_challenging_subset(
    ds: TimeSeriesDataset, descriptors, n_pairs: int = 125
) -> TimeSeriesDataset:
    """Subset of mutually confusable samples, kept in original order."""
    pairs = challenging_pairs(ds.labels, descriptors, n_pairs)
    chosen = np.sort(np.array([i for pair in pairs for i in pair]))
    return ds.subset(chosen, name=f"{ds.name}_challenging")


def _label_order(tokens):
    try:
        return sorted(tokens, key=lambda s: (float(s), s))
    except ValueError:
        return sorted(tokens)


def load_ucr_tsv(path, name: str | None = None) -> TimeSeriesDataset:
    """Read a UCR-style file: label then values, tab- or comma-separated."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EmptyFile(f"{path}: no data rows")

    raw_labels = []
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        sep = "\t" if "\t" in line else ","
        fields = [f.strip() for f in line.strip().split(sep)]
        if len(fields) < 2:
            raise RaggedRows(f"{path}:{lineno}: expected a label and at least one value")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise RaggedRows(f"{path}:{lineno}: {len(fields)} fields, expected {width}")
        try:
            values = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise UnparseableValue(f"{path}:{lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in values):
            raise UnparseableValue(f"{path}:{lineno}: missing or non-finite value")
        raw_labels.append(fields[0])
        rows.append(values)

    classes = _label_order(set(raw_labels))
    index = {c: i for i, c in enumerate(classes)}
    labels = np.array([index[c] for c in raw_labels], dtype=np.int64)
    if name is None:
        name = path.stem
        for suffix in ("_TRAIN", "_TEST"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
    return TimeSeriesDataset(np.array(rows), labels, tuple(classes), name)


def save_ucr_tsv(ds: TimeSeriesDataset, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for x, y in zip(ds.series, ds.labels):
            fh.write("\t".join([ds.class_names[y], *map(repr, x.tolist())]))
            fh.write("\n")


def train_test_split(ds: TimeSeriesDataset, test_fraction: float = 0.2, seed: int = 0):
    """Seeded stratified split. Returns sorted ``(train_idx, test_idx)``."""
    if len(ds) == 0:
        raise EmptyDataset("cannot split an empty dataset")
    counts = np.bincount(ds.labels, minlength=ds.n_classes)
    if np.any((counts > 0) & (counts < 2)):
        raise StratificationImpossible("every class needs at least 2 members to split")
    train_idx, test_idx = _sk_split(
        np.arange(len(ds)),
        test_size=test_fraction,
        random_state=seed,
        shuffle=True,
        stratify=ds.labels,
    )
    return np.sort(train_idx), np.sort(test_idx)


def stratified_folds(ds: TimeSeriesDataset, k: int = 10, seed: int = 0):
    """Seeded stratified k-fold partition as a list of ``(train_idx, test_idx)``."""
    counts = np.bincount(ds.labels, minlength=ds.n_classes)
    present = counts[counts > 0]
    if present.size == 0:
        raise EmptyDataset("cannot fold an empty dataset")
    if present.min() < k:
        raise StratificationImpossible(
            f"smallest class has {present.min()} members, fewer than k={k}"
        )
    skf = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    return [
        (np.sort(tr), np.sort(te))
        for tr, te in skf.split(np.zeros(len(ds)), ds.labels)
    ]
