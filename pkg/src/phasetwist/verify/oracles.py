"""Deliberately naive reference implementations used as independent oracles."""
from __future__ import annotations

import math

import numpy as np


def naive_mixed_norm(values: np.ndarray, h: float, p: float, q: float, order: int, weight: np.ndarray | None = None) -> float:
    """Mixed norm of a 2D array by explicit loops (``d = 1`` only).

    ``order=1``: for every ``xi`` column, ``(sum_x |F w|^p h)^(1/p)``, then the
    ``q``-norm over ``xi``.  ``order=2`` swaps the roles.  ``p`` and ``q`` are
    plain floats with ``math.inf`` meaning a maximum.
    """
    A = np.abs(np.asarray(values))
    if weight is not None:
        A = A * weight
    n0, n1 = A.shape

    def norm(seq, r):
        if math.isinf(r):
            return max(seq)
        return math.fsum(v**r * h for v in seq) ** (1.0 / r)

    if order == 1:
        inner = [norm([float(A[i, j]) for i in range(n0)], p) for j in range(n1)]
        return norm(inner, q)
    inner = [norm([float(A[i, j]) for j in range(n1)], q) for i in range(n0)]
    return norm(inner, p)

