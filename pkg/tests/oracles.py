"""Independent brute-force oracles used to derive expected test values.

These deliberately avoid the library's adaptive/refined code paths: dense-grid
maxima, fixed-panel midpoint Stieltjes sums, and plain numpy cumulative maxima.
"""

import numpy as np


def grid_sup(fun, lo: float, hi: float, n: int = 10**6) -> float:
    """Dense-grid supremum estimate over [lo, hi] with n points."""
    xs = np.linspace(lo, hi, n)
    return float(np.max(fun(xs)))


def midpoint_stieltjes(g, m, r: float, R: float, panels: int = 10**6) -> float:
    """Fixed-panel midpoint Riemann-Stieltjes sum of g against m over [r, R]."""
    ts = np.linspace(r, R, panels + 1)
    mids = 0.5 * (ts[:-1] + ts[1:])
    return float(np.sum(g(mids) * (m(ts[1:]) - m(ts[:-1]))))


def suffix_max(ys: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(ys[::-1])[::-1]


def prefix_max(ys: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(ys)


def table_from_samples(node_xs, sample_xs, sample_ys, side: str) -> np.ndarray:
    """Suffix/prefix maximum of an arbitrary sample cloud, read off at nodes."""
    node_xs = np.asarray(node_xs)
    sample_xs = np.asarray(sample_xs)
    sample_ys = np.asarray(sample_ys)
    out = np.empty(len(node_xs))
    for i, x in enumerate(node_xs):
        if side == "right":
            mask = sample_xs >= x
        else:
            mask = sample_xs <= x
        out[i] = sample_ys[mask].max()
    return out
