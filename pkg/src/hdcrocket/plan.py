"""Dilation schedule and bias fitting for the 84-kernel transform."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convolution import KERNEL_LENGTH, dilated_convolve
from .errors import EmptyDataset, InputTooShort
from .kernels import N_KERNELS, enumerate_kernels

__all__ = [
    "FEATURES_PER_KERNEL",
    "N_FEATURES",
    "MAX_DILATIONS",
    "DilationSchedule",
    "TransformPlan",
    "plan_dilations",
    "quantile_positions",
    "fit_biases",
    "fit_plan",
]

FEATURES_PER_KERNEL = 119
N_FEATURES = N_KERNELS * FEATURES_PER_KERNEL
MAX_DILATIONS = 32

_GOLDEN = (math.sqrt(5.0) + 1.0) / 2.0


@dataclass(frozen=True)
class DilationSchedule:
    dilations: np.ndarray
    features_per_dilation: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dilations, dtype=np.int64)
        f = np.asarray(self.features_per_dilation, dtype=np.int64)
        if d.shape != f.shape or d.ndim != 1:
            raise ValueError("dilations and feature counts must be matching 1-D arrays")
        object.__setattr__(self, "dilations", d)
        object.__setattr__(self, "features_per_dilation", f)

    def __len__(self):
        return len(self.dilations)


def plan_dilations(input_length: int) -> DilationSchedule:
    """Exponentially spaced dilations with 119 features per kernel in total.

    32 exponents evenly spaced over ``[0, log2((T - 1) / 8)]`` are floored
    to integer dilations; duplicate dilations pool their counts, which are
    then scaled by 119/32 and topped up round-robin from the smallest
    dilation.
    """
    if input_length < KERNEL_LENGTH:
        raise InputTooShort(
            f"input length {input_length} is shorter than the kernel length {KERNEL_LENGTH}"
        )
    max_exponent = math.log2((input_length - 1) / (KERNEL_LENGTH - 1))
    values = np.logspace(0.0, max_exponent, MAX_DILATIONS, base=2)
    dilations, counts = np.unique(np.floor(values).astype(np.int64), return_counts=True)
    counts = np.floor(counts * (FEATURES_PER_KERNEL / MAX_DILATIONS)).astype(np.int64)
    remainder = FEATURES_PER_KERNEL - int(counts.sum())
    i = 0
    while remainder > 0:
        counts[i] += 1
        remainder -= 1
        i = (i + 1) % len(counts)
    return DilationSchedule(dilations, counts)


def quantile_positions(n: int) -> np.ndarray:
    """Golden-ratio low-discrepancy positions ``(m * phi) mod 1, m = 1..n``."""
    return (np.arange(1, n + 1) * _GOLDEN) % 1.0


@dataclass(frozen=True)
class TransformPlan:
    """Fitted transform state.

    ``biases`` is flat with one entry per output feature, ordered
    kernel-major, then dilation, then ascending bias. Group ``(k, j)`` pads
    iff ``k + j`` is even.
    """

    input_length: int
    schedule: DilationSchedule
    biases: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        b = np.ascontiguousarray(self.biases, dtype=np.float64)
        if b.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} biases, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "biases", b)

    @property
    def kernels(self) -> np.ndarray:
        return enumerate_kernels()

    @property
    def n_features(self) -> int:
        return N_FEATURES

    @staticmethod
    def is_padded(kernel_index: int, dilation_index: int) -> bool:
        return (kernel_index + dilation_index) % 2 == 0

    def group_offsets(self) -> np.ndarray:
        """Start index of each (kernel, dilation) group in the feature vector.

        Shape ``(84, n_dilations + 1)``; the last column is the end of the
        kernel's block.
        """
        per_kernel = np.concatenate([[0], np.cumsum(self.schedule.features_per_dilation)])
        return per_kernel[None, :] + FEATURES_PER_KERNEL * np.arange(N_KERNELS)[:, None]

    def group_biases(self, kernel_index: int, dilation_index: int) -> np.ndarray:
        offsets = self.group_offsets()
        return self.biases[offsets[kernel_index, dilation_index] : offsets[kernel_index, dilation_index + 1]]


def fit_biases(train, kernels, schedule: DilationSchedule, seed=None) -> TransformPlan:
    """Set each group's biases from quantiles of one random training response.

    Groups are visited kernel-major then by dilation, each drawing one
    training series from a single seeded stream. Quantiles use linear
    interpolation between order statistics.
    """
    X = getattr(train, "series", train)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("bias fitting needs at least one training series")
    T = X.shape[1]
    if T < KERNEL_LENGTH:
        raise InputTooShort(f"input length {T} is shorter than the kernel length")
    if kernels is None:
        kernels = enumerate_kernels()

    rng = np.random.default_rng(seed)
    biases = np.empty(N_FEATURES)
    pos = 0
    for k in range(N_KERNELS):
        for dilation, count in zip(schedule.dilations, schedule.features_per_dilation):
            example = X[rng.integers(X.shape[0])]
            response = dilated_convolve(example, kernels[k], int(dilation))
            biases[pos : pos + count] = np.sort(
                np.quantile(response, quantile_positions(count))
            )
            pos += count
    return TransformPlan(T, schedule, biases, seed)


def fit_plan(train, seed=None) -> TransformPlan:
    X = getattr(train, "series", train)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("bias fitting needs at least one training series")
    return fit_biases(X, enumerate_kernels(), plan_dilations(X.shape[1]), seed)
