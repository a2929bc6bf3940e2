"""Quantile grids on the uniform midpoint lattice and their L2 geometry.

Every statistic in this package lives in one discrete space: n cells of
mass 1/n whose midpoints are u_i = (2i - 1) / (2n).  Means, variances and
correlations all use that same measure (population convention), so the
closed-form identities the solver relies on hold exactly on the grid
rather than only in the continuum limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGrid, GridSizeMismatch


def midpoints(n: int) -> np.ndarray:
    """Midpoints u_i = (2i - 1) / (2n) of the n uniform cells of (0, 1)."""
    if n < 2:
        raise ValueError(f"grid size must be >= 2, got {n}")
    i = np.arange(1, n + 1, dtype=float)
    return (2.0 * i - 1.0) / (2.0 * n)


def _freeze(values) -> np.ndarray:
    out = np.array(values, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class QuantileGrid:
    """A non-decreasing vector read as a quantile function at midpoints.

    values[i] is the quantile at u_i = (2i - 1) / (2n).  Monotonicity is
    exact (no tolerance): a grid that dips anywhere is rejected.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("quantile grid must be one-dimensional")
        if v.size < 2:
            raise ValueError(f"grid size must be >= 2, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("quantile grid contains non-finite entries")
        if np.any(np.diff(v) < 0.0):
            raise ValueError("quantile values must be non-decreasing")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def n(self) -> int:
        return self.values.size

    def midpoints(self) -> np.ndarray:
        return midpoints(self.n)


@dataclass(frozen=True)
class MomentTarget:
    """Mean/standard-deviation pair (mu, sigma) defining a moment set."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not np.isfinite(self.mu) or not np.isfinite(self.sigma):
            raise ValueError("moment target must be finite")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def _as_values(obj) -> np.ndarray:
    """Accept a QuantileGrid or a plain weight vector."""
    if isinstance(obj, QuantileGrid):
        return obj.values
    v = np.asarray(getattr(obj, "weights", obj), dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a one-dimensional vector")
    return v


def grid_mean(q) -> float:
    """Mean under the uniform 1/n cell measure."""
    return float(np.mean(_as_values(q)))


def grid_std(q) -> float:
    """Population standard deviation under the 1/n cell measure."""
    v = _as_values(q)
    return float(np.sqrt(np.mean((v - np.mean(v)) ** 2)))


def standardize_to(q, target: MomentTarget) -> QuantileGrid:
    """Affinely rescale a grid to have exactly the target moments.

    Raises DegenerateGrid when the input has zero spread; the affine map
    with positive slope preserves monotonicity exactly.
    """
    v = _as_values(q)
    m = np.mean(v)
    s = np.sqrt(np.mean((v - m) ** 2))
    if s == 0.0:
        raise DegenerateGrid("cannot standardize a constant grid")
    return QuantileGrid(target.mu + target.sigma * ((v - m) / s))


def wasserstein2_sq(a, b) -> float:
    """Squared 2-Wasserstein distance between two grids of equal size.

    With both quantile functions sampled on the same midpoint lattice the
    comonotone coupling is just the elementwise pairing, so the distance
    is the mean squared gap.
    """
    va, vb = _as_values(a), _as_values(b)
    if va.size != vb.size:
        raise GridSizeMismatch(f"grid sizes differ: {va.size} != {vb.size}")
    return float(np.mean((va - vb) ** 2))


def corr(a, b) -> float:
    """Correlation of two vectors under the 1/n measure, clipped to [-1, 1].

    Accepts quantile grids or raw weight vectors.  Raises DegenerateGrid
    if either side is constant.
    """
    va, vb = _as_values(a), _as_values(b)
    if va.size != vb.size:
        raise GridSizeMismatch(f"grid sizes differ: {va.size} != {vb.size}")
    da = va - np.mean(va)
    db = vb - np.mean(vb)
    sa = np.sqrt(np.mean(da**2))
    sb = np.sqrt(np.mean(db**2))
    if sa == 0.0 or sb == 0.0:
        raise DegenerateGrid("correlation undefined for a constant vector")
    c = float(np.mean(da * db) / (sa * sb))
    return min(1.0, max(-1.0, c))
