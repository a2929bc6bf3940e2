"""Distortion functions and their spectral weight grids.

A distortion g maps [0, 1] onto [0, 1], is non-decreasing and fixes the
endpoints.  Its risk functional has the spectral representation
H_g(G) = integral of gamma(u) G^{-1}(u) du with gamma(u) = g'(1 - u), so
the whole package works with gamma sampled as cell averages:

    weights[i] = n * (g(1 - (i-1)/n) - g(1 - i/n)),   i = 1..n,

which makes the weights nonnegative with mean exactly 1 (telescoping)
and turns concavity of g into monotonicity of the weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (AssumptionA1Violated, GridSizeMismatch, IngestError,
                     InvalidDistortion)
from .grids import QuantileGrid, corr, grid_std
from .references import ReferenceDistribution, sample_quantile

_A1_TOL = 1e-12

CVAR = "cvar"
VAR = "var"
DUAL_POWER = "dualpower"
PIECEWISE = "piecewise"
TABLE = "table"


@dataclass(frozen=True, eq=False)
class DistortionSpec:
    """Declarative description of a distortion function.

    Use the constructors; the raw fields depend on kind.  A table spec
    bypasses g and carries explicit spectral weights directly.
    """

    kind: str
    alpha: float | None = None
    beta: float | None = None
    knots: tuple[tuple[float, float], ...] | None = None
    table: np.ndarray | None = None

    @staticmethod
    def cvar(alpha: float) -> "DistortionSpec":
        """g(x) = min(x / (1 - alpha), 1): expected loss above VaR_alpha."""
        if not (0.0 < alpha < 1.0):
            raise InvalidDistortion(f"cvar level must lie in (0, 1), got {alpha}")
        return DistortionSpec(CVAR, alpha=float(alpha))

    @staticmethod
    def var(alpha: float) -> "DistortionSpec":
        """g(x) = 1{x > 1 - alpha}: a pure quantile.

        The spectral weight is a point mass, so on an n-cell grid it
        becomes a single cell of weight n.  Solvers refuse it unless the
        caller opts in, because results depend on the discretization.
        """
        if not (0.0 < alpha < 1.0):
            raise InvalidDistortion(f"var level must lie in (0, 1), got {alpha}")
        return DistortionSpec(VAR, alpha=float(alpha))

    @staticmethod
    def dual_power(beta: float) -> "DistortionSpec":
        """g(x) = 1 - (1 - x)^beta, concave for beta >= 1."""
        if not np.isfinite(beta) or beta < 1.0:
            raise InvalidDistortion(f"dual power exponent must be >= 1, got {beta}")
        return DistortionSpec(DUAL_POWER, beta=float(beta))

    @staticmethod
    def piecewise(knots) -> "DistortionSpec":
        """Piecewise-linear g through the given (x, y) knots."""
        kt = tuple((float(x), float(y)) for x, y in knots)
        if len(kt) < 2:
            raise InvalidDistortion("piecewise distortion needs at least two knots")
        xs = np.array([x for x, _ in kt])
        ys = np.array([y for _, y in kt])
        if kt[0] != (0.0, 0.0) or kt[-1] != (1.0, 1.0):
            raise InvalidDistortion("piecewise knots must start at (0,0) and end at (1,1)")
        if np.any(np.diff(xs) <= 0.0):
            raise InvalidDistortion("piecewise knot x-values must be strictly increasing")
        if np.any(np.diff(ys) < 0.0):
            raise InvalidDistortion("piecewise distortion must be non-decreasing")
        return DistortionSpec(PIECEWISE, knots=kt)

    @staticmethod
    def gamma_table(weights) -> "DistortionSpec":
        """Explicit spectral weights: nonnegative, mean 1 within 1e-9."""
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size < 2:
            raise InvalidDistortion("weight table must be a vector of length >= 2")
        if not np.all(np.isfinite(w)):
            raise InvalidDistortion("weight table contains non-finite entries")
        if np.any(w < 0.0):
            raise InvalidDistortion("weight table entries must be nonnegative")
        if abs(float(np.mean(w)) - 1.0) > 1e-9:
            raise InvalidDistortion(
                f"weight table mean must be 1 within 1e-9, got {float(np.mean(w))}")
        w = w.copy()
        w.setflags(write=False)
        return DistortionSpec(TABLE, table=w)

    def g(self, x) -> np.ndarray:
        """Evaluate the distortion function on [0, 1]."""
        xx = np.asarray(x, dtype=float)
        if self.kind == CVAR:
            return np.minimum(xx / (1.0 - self.alpha), 1.0)
        if self.kind == VAR:
            return (xx > 1.0 - self.alpha).astype(float)
        if self.kind == DUAL_POWER:
            return 1.0 - (1.0 - xx) ** self.beta
        if self.kind == PIECEWISE:
            xs = [k[0] for k in self.knots]
            ys = [k[1] for k in self.knots]
            return np.interp(xx, xs, ys)
        # table: g is piecewise linear between the cumulative knots
        n0 = self.table.size
        cum = np.concatenate(([0.0], np.cumsum(self.table[::-1]) / n0))
        return np.interp(xx, np.arange(n0 + 1) / n0, cum)


@dataclass(frozen=True, eq=False)
class GammaGrid:
    """Spectral weights gamma sampled as cell averages on n cells."""

    weights: np.ndarray
    sigma0: float
    is_concave: bool
    satisfies_a1: bool

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.size


def _segment_weights(knots, n: int) -> np.ndarray:
    """Cell averages of gamma for a piecewise-linear distortion.

    gamma is constant at the segment slope on each u-interval
    (1 - x_{j+1}, 1 - x_j), so the weight of cell i is the slope-weighted
    overlap with (i-1, i) in cell units.  Computing overlaps this way
    keeps constant runs exactly constant (no differencing dust), which
    the concavity detection relies on.
    """
    iu = np.arange(1, n + 1, dtype=float)
    w = np.zeros(n)
    for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
        slope = (y1 - y0) / (x1 - x0)
        if slope == 0.0:
            continue
        lo = n * (1.0 - x1)
        hi = n * (1.0 - x0)
        w += slope * np.clip(np.minimum(iu, hi) - np.maximum(iu - 1.0, lo),
                             0.0, 1.0)
    return w


def gamma_grid(spec: DistortionSpec, n: int) -> GammaGrid:
    """Build the cell-averaged weight grid for a distortion.

    For a table spec whose length differs from n the step function is
    re-averaged exactly onto the new cells.
    """
    if n < 2:
        raise InvalidDistortion(f"grid size must be >= 2, got {n}")
    if spec.kind == TABLE:
        if spec.table.size == n:
            w = spec.table.copy()
        else:
            # exact cell averages of the step function via its cumulative
            n0 = spec.table.size
            cum = np.concatenate(([0.0], np.cumsum(spec.table) / n0))
            edges = np.arange(n + 1) / n
            c = np.interp(edges, np.arange(n0 + 1) / n0, cum)
            w = n * np.diff(c)
    elif spec.kind == CVAR:
        a = spec.alpha
        w = _segment_weights(((0.0, 0.0), (1.0 - a, 1.0), (1.0, 1.0)), n)
    elif spec.kind == PIECEWISE:
        w = _segment_weights(spec.knots, n)
    elif spec.kind == DUAL_POWER:
        if spec.beta == 1.0:
            w = np.ones(n)
        else:
            # g(1 - u) = 1 - u^beta, so cell increments reduce to u^beta
            # differences; skipping the 1 - (...) round trip keeps the
            # identity case and the tiny-u cells clean
            edges = np.arange(n + 1, dtype=float) / n
            w = n * np.diff(edges**spec.beta)
    else:
        edges = np.arange(n + 1, dtype=float) / n
        gvals = spec.g(1.0 - edges)
        w = n * (gvals[:-1] - gvals[1:])
    # float dust from differencing g may leave slightly negative cells
    scale = max(1.0, float(np.max(w, initial=1.0)))
    if np.any(w < -1e-9 * scale):
        raise InvalidDistortion("distortion produced negative spectral weights")
    w = np.maximum(w, 0.0)
    sigma0 = grid_std(w)
    is_concave = bool(np.all(np.diff(w) >= -1e-12))
    return GammaGrid(weights=w, sigma0=sigma0, is_concave=is_concave,
                     satisfies_a1=sigma0 > _A1_TOL)


def distortion_value(gamma: GammaGrid, q: QuantileGrid) -> float:
    """H_g on the grid: mean of weights[i] * values[i]."""
    if gamma.n != q.n:
        raise GridSizeMismatch(f"grid sizes differ: {gamma.n} != {q.n}")
    return float(np.mean(gamma.weights * q.values))


def rho(gamma: GammaGrid, ref: ReferenceDistribution, n: int | None = None) -> float:
    """Correlation between the reference quantile grid and the weights."""
    if n is None:
        n = gamma.n
    if n != gamma.n:
        raise GridSizeMismatch(f"gamma grid has {gamma.n} cells, requested {n}")
    if not gamma.satisfies_a1:
        raise AssumptionA1Violated("sigma0 = 0: Assumption 2.1 fails")
    return corr(sample_quantile(ref, n), gamma.weights)


def parse_distortion(text: str) -> DistortionSpec:
    """Parse compact distortion syntax.

    Grammar: ``cvar:0.7`` | ``var:0.95`` | ``dualpower:5`` |
    ``piecewise:x1,y1;x2,y2;...`` | ``gammafile:<path>``.
    """
    head, sep, rest = text.partition(":")
    head = head.strip().lower()
    if not sep:
        raise InvalidDistortion(f"malformed distortion spec: {text!r}")
    try:
        if head == "cvar":
            return DistortionSpec.cvar(float(rest))
        if head == "var":
            return DistortionSpec.var(float(rest))
        if head == "dualpower":
            return DistortionSpec.dual_power(float(rest))
        if head == "piecewise":
            knots = []
            for part in rest.split(";"):
                xy = part.split(",")
                if len(xy) != 2:
                    raise InvalidDistortion(f"malformed piecewise knot: {part!r}")
                knots.append((float(xy[0]), float(xy[1])))
            return DistortionSpec.piecewise(knots)
        if head == "gammafile":
            return DistortionSpec.gamma_table(_load_weights(rest))
    except InvalidDistortion:
        raise
    except ValueError as exc:
        raise InvalidDistortion(f"malformed distortion spec {text!r}: {exc}") from None
    raise InvalidDistortion(f"unknown distortion kind: {head!r}")


def _load_weights(path: str) -> np.ndarray:
    out = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                out.append(float(s.split(",")[0]))
            except ValueError:
                raise IngestError(f"{path}: line {ln}: not a number: {s!r}") from None
    if len(out) < 2:
        raise IngestError(f"{path}: need at least two weights")
    return np.asarray(out, dtype=float)
