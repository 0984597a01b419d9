"""Timestamp hypervectors and PPV / HDC pooling of thresholded responses.

A descriptor has one entry per (kernel, dilation, bias) feature. PPV
pooling takes the fraction of pooled time steps whose response exceeds
the bias. HDC pooling instead sums ``+P[t, i]`` or ``-P[t, i]`` over the
same time steps, where row ``P[t]`` is a fractional power of a fixed
random seed vector encoding the position ``p_t = s * t / T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import LengthMismatch, MissingEncoding
from .kernels import N_KERNELS, kernel_positions
from .plan import FEATURES_PER_KERNEL, N_FEATURES, TransformPlan

__all__ = [
    "PhaseVector",
    "TimeEncodingTable",
    "make_phases",
    "fractional_power_vector",
    "fractional_power_matrix",
    "build_time_encoding",
    "effective_lengths",
    "transform",
    "transform_batch",
    "transform_batch_scales",
]

MODES = ("ppv", "hdc")


@dataclass(frozen=True)
class PhaseVector:
    """Spectral phases of the real seed vector.

    Conjugate symmetric: ``theta[0] = 0``, ``theta[D - j] = -theta[j]`` and,
    for even ``D``, ``theta[D / 2] = 0`` so every fractional power stays real.
    """

    theta: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        theta = np.ascontiguousarray(self.theta, dtype=np.float64)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def dim(self) -> int:
        return self.theta.shape[0]


def make_phases(D: int = N_FEATURES, seed=None) -> PhaseVector:
    if D < 2:
        raise ValueError("dimension must be at least 2")
    rng = np.random.default_rng(seed)
    theta = np.zeros(D)
    half = (D - 1) // 2
    # negated uniform[-pi, pi) lands in (-pi, pi]
    free = -rng.uniform(-np.pi, np.pi, size=half)
    theta[1 : half + 1] = free
    theta[D - half :] = -free[::-1]
    return PhaseVector(theta, seed)


def fractional_power_matrix(phases: PhaseVector, powers) -> np.ndarray:
    """Rows ``v ** p`` for each ``p`` in ``powers``, shape ``(len(powers), D)``.

    ``v ** p`` is the inverse DFT (``1/D`` normalisation) of
    ``exp(1j * p * theta)``; it has unit Euclidean norm.
    """
    powers = np.atleast_1d(np.asarray(powers, dtype=np.float64))
    D = phases.dim
    spectrum = np.exp(1j * powers[:, None] * phases.theta[None, : D // 2 + 1])
    return np.fft.irfft(spectrum, n=D, axis=1)


def fractional_power_vector(phases: PhaseVector, p: float) -> np.ndarray:
    return fractional_power_matrix(phases, [p])[0]


@dataclass(frozen=True)
class TimeEncodingTable:
    """Timestamp vectors for a series of length ``T`` at scale ``s``.

    Stored feature-major as ``PT`` with shape ``(D, T)``; ``P`` is the
    ``(T, D)`` view whose row ``t - 1`` encodes time step ``t``.
    """

    scale: float
    length: int
    PT: np.ndarray

    @property
    def P(self) -> np.ndarray:
        return self.PT.T

    @property
    def positions(self) -> np.ndarray:
        return self.scale * np.arange(1, self.length + 1) / self.length


def build_time_encoding(T: int, s: float, phases: PhaseVector) -> TimeEncodingTable:
    """Pre-compute ``P_t`` for ``t = 1..T``.

    At ``s = 0`` every row is all ones, the identity of element-wise
    binding, so HDC pooling reduces to a bipolar count.
    """
    if T < 1:
        raise ValueError("length must be positive")
    if s < 0:
        raise ValueError("scale must be non-negative")
    if s == 0:
        PT = np.ones((phases.dim, T))
    else:
        positions = s * np.arange(1, T + 1) / T
        PT = np.ascontiguousarray(fractional_power_matrix(phases, positions).T)
    PT.setflags(write=False)
    return TimeEncodingTable(float(s), int(T), PT)


def _cumulative_counts(plan: TransformPlan) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(plan.schedule.features_per_dilation)]).astype(np.int64)


def effective_lengths(plan: TransformPlan) -> np.ndarray:
    """Number of pooled time steps per feature."""
    T = plan.input_length
    out = np.empty(N_FEATURES, dtype=np.int64)
    cum = _cumulative_counts(plan)
    for k in range(N_KERNELS):
        for j, d in enumerate(plan.schedule.dilations):
            n = T if plan.is_padded(k, j) else T - 8 * int(d)
            base = k * FEATURES_PER_KERNEL
            out[base + cum[j] : base + cum[j + 1]] = n
    return out


_BLOCK = 32
_REASSOC = {"reassoc", "nsz", "contract"}


@njit(cache=True)
def _taps(x, d, S, A):
    T = x.shape[0]
    for t in range(T):
        A[t] = 0.0
    for j in range(9):
        shift = (j - 4) * d
        for t in range(T):
            u = t + shift
            v = x[u] if 0 <= u < T else 0.0
            S[j, t] = v
            A[t] -= v


@njit(cache=True)
def _block_responses(X, n0, n1, d, positions, S, A, C):
    # C[k, m, t]: response of kernel k for sample n0 + m
    for m in range(n1 - n0):
        _taps(X[n0 + m], d, S, A)
        for k in range(84):
            p0 = positions[k, 0]
            p1 = positions[k, 1]
            p2 = positions[k, 2]
            for t in range(X.shape[1]):
                C[k, m, t] = A[t] + 3.0 * (S[p0, t] + S[p1, t] + S[p2, t])


@njit(cache=True)
def _ppv_kernel(X, dilations, cum, biases, positions):
    N, T = X.shape
    out = np.zeros((N, 84 * 119))
    S = np.empty((9, T))
    A = np.empty(T)
    C = np.empty((84, _BLOCK, T))
    for n0 in range(0, N, _BLOCK):
        n1 = min(n0 + _BLOCK, N)
        for j in range(dilations.shape[0]):
            d = dilations[j]
            _block_responses(X, n0, n1, d, positions, S, A, C)
            for k in range(84):
                if (k + j) % 2 == 0:
                    start, stop = 0, T
                else:
                    start, stop = 4 * d, T - 4 * d
                base = k * 119 + cum[j]
                L = stop - start
                for i in range(base, base + cum[j + 1] - cum[j]):
                    bias = biases[i]
                    for m in range(n1 - n0):
                        c = C[k, m, start:stop]
                        count = 0
                        for t in range(L):
                            if c[t] > bias:
                                count += 1
                        out[n0 + m, i] = count / L
    return out


@njit(cache=True, fastmath=_REASSOC)
def _row_totals(dilations, cum, PT):
    # sum of P[t, i] over each feature's pooled range
    T = PT.shape[1]
    totals = np.empty(PT.shape[0])
    for j in range(dilations.shape[0]):
        d = dilations[j]
        for k in range(84):
            if (k + j) % 2 == 0:
                start, stop = 0, T
            else:
                start, stop = 4 * d, T - 4 * d
            base = k * 119 + cum[j]
            for i in range(base, base + cum[j + 1] - cum[j]):
                row = PT[i, start:stop]
                acc = 0.0
                for t in range(stop - start):
                    acc += row[t]
                totals[i] = acc
    return totals


@njit(cache=True, fastmath=_REASSOC)
def _hdc_kernel(X, dilations, cum, biases, positions, PT):
    # sum_t sign_t * P[t, i] == 2 * sum_{c > B} P[t, i] - sum_t P[t, i]
    N, T = X.shape
    totals = _row_totals(dilations, cum, PT)
    out = np.zeros((N, 84 * 119))
    S = np.empty((9, T))
    A = np.empty(T)
    C = np.empty((84, _BLOCK, T))
    for n0 in range(0, N, _BLOCK):
        n1 = min(n0 + _BLOCK, N)
        for j in range(dilations.shape[0]):
            d = dilations[j]
            _block_responses(X, n0, n1, d, positions, S, A, C)
            for k in range(84):
                if (k + j) % 2 == 0:
                    start, stop = 0, T
                else:
                    start, stop = 4 * d, T - 4 * d
                base = k * 119 + cum[j]
                L = stop - start
                for i in range(base, base + cum[j + 1] - cum[j]):
                    bias = biases[i]
                    row = PT[i, start:stop]
                    total = totals[i]
                    for m in range(n1 - n0):
                        c = C[k, m, start:stop]
                        acc = 0.0
                        for t in range(L):
                            if c[t] > bias:
                                acc += row[t]
                        out[n0 + m, i] = 2.0 * acc - total
    return out


@njit(cache=True, fastmath=_REASSOC)
def _hdc_multi_kernel(X, dilations, cum, biases, positions, PTs):
    n_scales = PTs.shape[0]
    N, T = X.shape
    totals = np.empty((n_scales, PTs.shape[1]))
    for q in range(n_scales):
        totals[q] = _row_totals(dilations, cum, PTs[q])
    out = np.zeros((n_scales, N, 84 * 119))
    S = np.empty((9, T))
    A = np.empty(T)
    C = np.empty((84, _BLOCK, T))
    for n0 in range(0, N, _BLOCK):
        n1 = min(n0 + _BLOCK, N)
        for j in range(dilations.shape[0]):
            d = dilations[j]
            _block_responses(X, n0, n1, d, positions, S, A, C)
            for k in range(84):
                if (k + j) % 2 == 0:
                    start, stop = 0, T
                else:
                    start, stop = 4 * d, T - 4 * d
                base = k * 119 + cum[j]
                L = stop - start
                for i in range(base, base + cum[j + 1] - cum[j]):
                    bias = biases[i]
                    for q in range(n_scales):
                        row = PTs[q, i, start:stop]
                        total = totals[q, i]
                        for m in range(n1 - n0):
                            c = C[k, m, start:stop]
                            acc = 0.0
                            for t in range(L):
                                if c[t] > bias:
                                    acc += row[t]
                            out[q, n0 + m, i] = 2.0 * acc - total
    return out


def _as_matrix(data) -> np.ndarray:
    X = getattr(data, "series", data)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    return np.ascontiguousarray(X)


def _plan_arrays(plan: TransformPlan):
    return (
        plan.schedule.dilations.astype(np.int64),
        _cumulative_counts(plan),
        np.ascontiguousarray(plan.biases),
        np.ascontiguousarray(kernel_positions()),
    )


def _check(X, plan, enc, mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if X.shape[0] and X.shape[1] != plan.input_length:
        raise LengthMismatch(
            f"series length {X.shape[1]} does not match plan length {plan.input_length}"
        )
    if mode == "hdc":
        if enc is None:
            raise MissingEncoding("HDC pooling requires a time encoding table")
        if enc.length != plan.input_length or enc.PT.shape[0] != N_FEATURES:
            raise LengthMismatch(
                f"encoding covers {enc.length} steps, plan expects {plan.input_length}"
            )


def transform_batch(data, plan: TransformPlan, enc: TimeEncodingTable | None = None,
                    mode: str = "ppv") -> np.ndarray:
    """Descriptors for every row of ``data``, shape ``(N, 9996)``."""
    X = _as_matrix(data)
    if X.shape[0] == 0:
        _check(X, plan, enc, mode)
        return np.zeros((0, N_FEATURES))
    _check(X, plan, enc, mode)
    if mode == "ppv":
        return _ppv_kernel(X, *_plan_arrays(plan))
    return _hdc_kernel(X, *_plan_arrays(plan), enc.PT)


def transform(x, plan: TransformPlan, enc: TimeEncodingTable | None = None,
              mode: str = "ppv") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("transform takes a single series; use transform_batch")
    if x.shape[0] != plan.input_length:
        raise LengthMismatch(
            f"series length {x.shape[0]} does not match plan length {plan.input_length}"
        )
    return transform_batch(x[None, :], plan, enc, mode)[0]


def transform_batch_scales(data, plan: TransformPlan, tables) -> np.ndarray:
    """HDC descriptors for several encodings in one pass, shape ``(S, N, 9996)``.

    Convolutions and thresholding are shared across the encodings.
    """
    X = _as_matrix(data)
    tables = list(tables)
    for enc in tables:
        _check(X, plan, enc, "hdc")
    if X.shape[0] == 0 or not tables:
        return np.zeros((len(tables), X.shape[0], N_FEATURES))
    PTs = np.ascontiguousarray(np.stack([enc.PT for enc in tables]))
    return _hdc_multi_kernel(X, *_plan_arrays(plan), PTs)
