"""Pure numpy versions of the compiled kernels."""

from __future__ import annotations

import numpy as np


def zero_one_product(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError("shape mismatch")
    # float64 BLAS is exact here: every count is an integer below 2**53
    return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def relation_constants(counts, labels, nlabels: int):
    counts = np.asarray(counts, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    values = np.full(nlabels, -1, dtype=np.int64)
    flat_c = counts.ravel()
    flat_l = labels.ravel()
    for lab in range(nlabels):
        idx = np.flatnonzero(flat_l == lab)
        if idx.size == 0:
            continue
        vals = flat_c[idx]
        first = vals[0]
        bad = np.flatnonzero(vals != first)
        values[lab] = first
        if bad.size:
            ncols = counts.shape[1]
            a, b = int(idx[0]), int(idx[bad[0]])
            return values, ((a // ncols, a % ncols), (b // ncols, b % ncols))
    return values, None
