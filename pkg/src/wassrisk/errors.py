"""Typed exceptions raised across the package.

Every error callers are expected to catch derives from ``WassriskError``,
so library users can guard a whole solve with a single except clause while
the CLI maps subclasses onto exit codes.
"""

from __future__ import annotations


class WassriskError(Exception):
    """Base class for all package errors."""


class DegenerateGrid(WassriskError):
    """An operation needed positive spread but the vector is constant."""


class GridSizeMismatch(WassriskError):
    """Two grids that must share a size do not."""


class MomentMismatch(WassriskError):
    """A grid does not carry the moments an operation requires."""


class IngestError(WassriskError):
    """A data file could not be parsed into samples or weights."""


class InvalidDistortion(WassriskError):
    """A distortion specification violates its defining constraints."""


class AssumptionA1Violated(WassriskError):
    """Assumption 2.1 fails: spectral weights must be square-integrable
    with positive spread (sigma0 > 0).  See README, 'Assumptions'."""


class AssumptionA4Violated(WassriskError):
    """Assumption 4.1 fails: a correlation map that must be monotone in
    the penalty parameter was detected non-monotone."""


class NotConcave(WassriskError):
    """A closed form valid only for concave distortions was requested
    for a non-concave one."""


class RadiusOutOfRange(WassriskError):
    """A budget threshold was requested outside (eps_min, eps_max)."""


class RhoDegenerate(WassriskError):
    """The reference quantile and the spectral weights are perfectly
    correlated, so the budget-threshold equation has no finite root."""


class InfeasibleRadius(WassriskError):
    """The requested ball does not intersect the moment set."""


class DegenerateProjection(WassriskError):
    """The isotonic projection of the score vector is constant, so no
    standardized optimizer exists."""


class SamplingExhausted(WassriskError):
    """The feasible-grid sampler gave up before finding a point."""


class InternalCheckFailed(WassriskError):
    """Two routes that must agree on the same quantity did not.

    Raised when a closed-form value and its direct grid evaluation
    disagree beyond tolerance; indicates a bug, not bad input.
    """


class VerificationFailed(WassriskError):
    """The brute-force check found the solver value untrustworthy."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
