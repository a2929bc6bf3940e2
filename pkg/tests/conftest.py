import numpy as np
import pytest

from wassrisk import (
    DistortionSpec,
    MomentTarget,
    PenaltySpec,
    ProblemSpec,
    ReferenceDistribution,
)


def smoothstep_table(n: int) -> DistortionSpec:
    """Exact cell averages of the non-concave distortion g(x) = 3x^2 - 2x^3.

    Its weight profile is the symmetric hump 6u(1-u), which is non-monotone,
    so this is the canonical fixture for the isotonic solver path.
    """
    g = lambda x: 3.0 * x**2 - 2.0 * x**3
    i = np.arange(1, n + 1)
    return DistortionSpec.gamma_table(n * (g(1 - (i - 1) / n) - g(1 - i / n)))


def problem(distortion, delta=0.0, eps=None, n=10_000, mu=0.0, sigma=1.0,
            ref=None, allow_var=False) -> ProblemSpec:
    return ProblemSpec(
        ref if ref is not None else ReferenceDistribution.normal(0.0, 1.0),
        distortion,
        MomentTarget(mu, sigma),
        PenaltySpec(delta),
        radius_sq=eps,
        n=n,
        allow_var=allow_var,
    )


@pytest.fixture(scope="session")
def normal_ref():
    return ReferenceDistribution.normal(0.0, 1.0)
