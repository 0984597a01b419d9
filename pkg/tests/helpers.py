"""Small deterministic datasets shared across test modules."""

import numpy as np
from hdcrocket.datasets import TimeSeriesDataset


def random_dataset(n=24, length=40, n_classes=2, seed=0, name="random"):
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % n_classes
    X = rng.normal(size=(n, length)) + labels[:, None]
    return TimeSeriesDataset(X, labels, tuple(str(c + 1) for c in range(n_classes)), name)


def mean_shift_dataset(n=40, length=30, seed=0):
    """Labels depend only on the series mean, never on time position."""
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % 2
    X = rng.normal(scale=0.3, size=(n, length)) + np.where(labels, 2.0, -2.0)[:, None]
    return TimeSeriesDataset(X, labels, ("low", "high"), "meanshift")


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
