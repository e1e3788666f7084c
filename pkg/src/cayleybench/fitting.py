"""Linear envelope fitting for observed count tables."""

from __future__ import annotations

import numpy as np


def fit_linear_envelope(xs, ys, nonneg_slope: bool = True) -> tuple[float, float]:
    """Least-squares line through (xs, ys), lifted so it dominates every point.

    Returns (c1, c2) with ys[i] <= c1*xs[i] + c2 for all i.  With a single
    distinct x the slope is 0 and c2 is the max observation.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) == 0:
        return 0.0, 0.0
    if len(set(xs.tolist())) == 1:
        return 0.0, float(ys.max())
    a = np.vstack([xs, np.ones_like(xs)]).T
    (c1, c2), *_ = np.linalg.lstsq(a, ys, rcond=None)
    if nonneg_slope and c1 < 0:
        c1 = 0.0
    c2 = float(c2 + max(0.0, float(np.max(ys - (c1 * xs + c2)))))
    return float(c1), c2
