"""Dilated convolution with the fixed length-9 kernels.

Responses use centred alignment: output index ``t`` sees taps
``x[t + (j - 4) * d]`` for ``j = 0..8``, with zeros outside the series.
Unpadded feature groups later restrict pooling to ``[4d, T - 1 - 4d]``.
"""

from __future__ import annotations

import numpy as np

from .errors import DilationExceedsLength
from .kernels import kernel_positions

__all__ = [
    "KERNEL_LENGTH",
    "check_dilation",
    "valid_range",
    "shifted_taps",
    "dilated_convolve",
    "convolve_group_fast",
]

KERNEL_LENGTH = 9
CENTER = 4


def check_dilation(length: int, dilation: int) -> None:
    if length < 1:
        raise ValueError("series must be non-empty")
    if dilation < 1 or (KERNEL_LENGTH - 1) * dilation > length - 1:
        raise DilationExceedsLength(
            f"dilation {dilation} too large for series of length {length}"
        )


def valid_range(length: int, dilation: int, padded: bool) -> tuple[int, int]:
    """Half-open ``[start, stop)`` of pooled time steps."""
    if padded:
        return 0, length
    return CENTER * dilation, length - CENTER * dilation


def shifted_taps(x, dilation: int) -> np.ndarray:
    """``S[j, t] = x[t + (j - 4) * d]`` with zero fill, shape ``(9, T)``."""
    x = np.asarray(x, dtype=np.float64)
    T = x.shape[-1]
    S = np.zeros((KERNEL_LENGTH, T))
    for j in range(KERNEL_LENGTH):
        shift = (j - CENTER) * dilation
        if shift >= 0:
            S[j, : T - shift] = x[shift:]
        else:
            S[j, -shift:] = x[: T + shift]
    return S


def dilated_convolve(x, kernel, dilation: int) -> np.ndarray:
    """Response of one kernel at one dilation, same length as ``x``."""
    x = np.asarray(x, dtype=np.float64)
    check_dilation(x.shape[0], dilation)
    kernel = np.asarray(kernel, dtype=np.float64)
    out = np.zeros(x.shape[0])
    S = shifted_taps(x, dilation)
    for j in range(KERNEL_LENGTH):
        out += kernel[j] * S[j]
    return out


def convolve_group_fast(x, dilation: int, kernel_indices=None) -> np.ndarray:
    """Responses of all 84 kernels at one dilation, shape ``(84, T)``.

    Every weight is ``-1`` or ``2 = -1 + 3``, so each response is the
    shared term ``-sum_j S_j`` plus ``3 * (S_a + S_b + S_c)`` over the
    kernel's three positions holding 2.
    """
    x = np.asarray(x, dtype=np.float64)
    check_dilation(x.shape[0], dilation)
    if kernel_indices is None:
        kernel_indices = kernel_positions()
    S = shifted_taps(x, dilation)
    A = -S.sum(axis=0)
    G = 3.0 * S
    return A[None, :] + G[kernel_indices].sum(axis=1)
