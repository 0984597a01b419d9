"""The fixed MiniROCKET kernel set."""

from functools import lru_cache
from itertools import combinations

import numpy as np

__all__ = ["N_KERNELS", "kernel_positions", "enumerate_kernels"]

N_KERNELS = 84


@lru_cache(maxsize=None)
def _positions():
    arr = np.array(list(combinations(range(9), 3)), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def kernel_positions() -> np.ndarray:
    """Indices of the three weights equal to 2, shape ``(84, 3)``, lexicographic."""
    return _positions()


def enumerate_kernels() -> np.ndarray:
    """All 84 weight vectors of length 9 over {-1, 2} with three 2s.

    Row order follows :func:`kernel_positions`, so row 0 is
    ``[2, 2, 2, -1, -1, -1, -1, -1, -1]``.
    """
    W = np.full((N_KERNELS, 9), -1, dtype=np.int64)
    np.put_along_axis(W, _positions(), 2, axis=1)
    return W
