"""Deterministic Tree Summation.

Pairwise halving reduction: at every level element k is added to element
k + stride. The order of additions depends only on the array length, so a sum is
bit-reproducible however the terms were produced.
"""

from __future__ import annotations

import numpy as np


def tree_sum(values: np.ndarray, axis: int | None = None) -> np.ndarray | float:
    """Sum along an axis in fixed pairwise order.

    Args:
        values: Array of terms
        axis: Axis to reduce; None flattens and returns a float

    Returns:
        Reduced array, or a float when axis is None
    """
    arr = np.asarray(values, dtype=float)
    if axis is None:
        arr = arr.ravel()
        axis = 0
    arr = np.moveaxis(arr, axis, -1)
    if arr.shape[-1] == 0:
        reduced = np.zeros(arr.shape[:-1])
    else:
        while arr.shape[-1] > 1:
            if arr.shape[-1] % 2:
                # Zero padding leaves every partial sum unchanged
                arr = np.concatenate([arr, np.zeros(arr.shape[:-1] + (1,))], axis=-1)
            half = arr.shape[-1] // 2
            arr = arr[..., :half] + arr[..., half:]
        reduced = arr[..., 0]
    if reduced.ndim == 0:
        return float(reduced)
    return reduced


def matrix_sum(terms: np.ndarray) -> float:
    """Sum of a 2D array: tree over each row, then tree over the row sums."""
    return float(tree_sum(tree_sum(terms, axis=1)))
