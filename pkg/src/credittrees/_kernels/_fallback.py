"""Pure-numpy implementations of the split-scan kernels.

Used when the compiled extension is unavailable (or forced via
CREDITTREES_KERNEL=python). Semantics must match _native.pyx.
"""

import numpy as np

BACKEND = "python"


def _entropy_rows(dist):
    """Entropy in bits per row of a (m, K) weight matrix; 0*log(0) = 0."""
    totals = dist.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = dist / totals[:, None]
        terms = np.where(dist > 0, p * np.log2(p, where=p > 0), 0.0)
    h = -terms.sum(axis=1)
    return np.where(totals > 0, h, 0.0)


def rep_numeric_scan(values, cls, weights, miss_cw):
    """Information gain at every midpoint between distinct sorted values.

    values/cls/weights describe the known-valued instances, sorted by value.
    miss_cw is the per-class weight of instances missing this attribute; it
    is shared across the two children proportionally to their known totals
    before each gain is computed.

    Returns (thresholds, gains, left_totals, right_totals); the totals
    include the distributed missing mass.
    """
    n = len(values)
    k = len(miss_cw)
    empty = (np.empty(0), np.empty(0), np.empty(0), np.empty(0))
    if n < 2:
        return empty
    boundaries = np.nonzero(np.diff(values) > 0)[0]
    if len(boundaries) == 0:
        return empty
    onehot = np.zeros((n, k))
    onehot[np.arange(n), cls] = weights
    cum = np.cumsum(onehot, axis=0)
    left = cum[boundaries]
    right = cum[-1] - left
    lt = left.sum(axis=1)
    rt = right.sum(axis=1)
    known = lt + rt
    frac_left = np.where(known > 0, lt / known, 0.5)
    left_full = left + frac_left[:, None] * miss_cw
    right_full = right + (1.0 - frac_left)[:, None] * miss_cw
    parent = cum[-1] + miss_cw
    total = parent.sum()
    h_parent = _entropy_rows(parent[None, :])[0]
    lt_full = left_full.sum(axis=1)
    rt_full = right_full.sum(axis=1)
    gains = (h_parent
             - (lt_full / total) * _entropy_rows(left_full)
             - (rt_full / total) * _entropy_rows(right_full))
    thresholds = (values[boundaries] + values[boundaries + 1]) / 2.0
    return thresholds, gains, lt_full, rt_full


def lad_numeric_scan(values, zw, w, extra_zw, extra_w):
    """Least-squares gain at every midpoint between distinct sorted values.

    zw = w*z and w are (n, K) arrays aligned with the sorted known values.
    extra_zw/extra_w are per-class sums of instances that join both branches
    (missing the attribute). Gain = sum_k (S_zw^2 / S_w) over both branches;
    larger is better (it is the reduction of weighted squared error).

    Returns (thresholds, gains).
    """
    n = len(values)
    if n < 2:
        return np.empty(0), np.empty(0)
    boundaries = np.nonzero(np.diff(values) > 0)[0]
    if len(boundaries) == 0:
        return np.empty(0), np.empty(0)
    czw = np.cumsum(zw, axis=0)
    cw = np.cumsum(w, axis=0)
    lz = czw[boundaries] + extra_zw
    lw = cw[boundaries] + extra_w
    rz = (czw[-1] - czw[boundaries]) + extra_zw
    rw = (cw[-1] - cw[boundaries]) + extra_w
    with np.errstate(divide="ignore", invalid="ignore"):
        gains = (np.where(lw > 0, lz * lz / lw, 0.0)
                 + np.where(rw > 0, rz * rz / rw, 0.0)).sum(axis=1)
    thresholds = (values[boundaries] + values[boundaries + 1]) / 2.0
    return thresholds, gains
