import numpy as np
import pytest
from scipy import stats

from wassrisk import (
    IngestError,
    MomentMismatch,
    MomentTarget,
    QuantileGrid,
    ReferenceDistribution,
    grid_mean,
    grid_std,
    load_samples_csv,
    sample_quantile,
    standardize_to,
    wasserstein2_sq,
    wasserstein2_sq_decomposed,
)
from wassrisk.references import inverse_normal_cdf


def test_inverse_normal_against_scipy():
    p = np.concatenate([
        np.array([1e-10, 1e-7, 1e-4, 0.5, 1 - 1e-4, 1 - 1e-7, 1 - 1e-10]),
        np.linspace(0.001, 0.999, 4001),
    ])
    err = np.abs(inverse_normal_cdf(p) - stats.norm.ppf(p))
    assert err.max() < 1e-9


def test_inverse_normal_symmetry_and_median():
    # 1 - p rounds, so symmetry holds to rounding, not bitwise
    assert inverse_normal_cdf(0.5) == 0.0
    p = np.linspace(0.01, 0.49, 100)
    np.testing.assert_allclose(
        inverse_normal_cdf(p), -inverse_normal_cdf(1 - p), rtol=0, atol=1e-12)


def test_inverse_normal_scalar_in_scalar_out():
    out = inverse_normal_cdf(0.975)
    assert np.ndim(out) == 0
    assert abs(out - 1.959963984540054) < 1e-12


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.1])
def test_inverse_normal_domain(p):
    with pytest.raises(ValueError):
        inverse_normal_cdf(p)


def test_normal_quartiles_n2():
    q = sample_quantile(ReferenceDistribution.normal(0.0, 1.0), 2)
    np.testing.assert_allclose(
        q.values, [-0.6744897501960817, 0.6744897501960817], rtol=0, atol=1e-12)


def test_uniform_midpoints_n4():
    q = sample_quantile(ReferenceDistribution.uniform(0.0, 1.0), 4)
    np.testing.assert_array_equal(q.values, [0.125, 0.375, 0.625, 0.875])


def test_empirical_identity_n3():
    ref = ReferenceDistribution.empirical(np.array([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(sample_quantile(ref, 3).values, [1.0, 2.0, 3.0])


def test_empirical_left_continuous_steps():
    # two atoms at 0 and 1: the step sits at u = 1/2
    ref = ReferenceDistribution.empirical(np.array([0.0, 1.0]))
    np.testing.assert_array_equal(sample_quantile(ref, 4).values, [0, 0, 1, 1])


def test_empirical_population_moments():
    s = np.array([1.0, 2.0, 3.0, 6.0])
    ref = ReferenceDistribution.empirical(s)
    assert ref.mu_f == s.mean()
    assert abs(ref.sigma_f - s.std()) < 1e-15


def test_empirical_rejects_constant_samples():
    with pytest.raises(ValueError):
        ReferenceDistribution.empirical(np.array([2.0, 2.0, 2.0]))


def test_normal_rejects_nonpositive_sigma():
    with pytest.raises(ValueError):
        ReferenceDistribution.normal(0.0, 0.0)


def test_uniform_rejects_empty_interval():
    with pytest.raises(ValueError):
        ReferenceDistribution.uniform(1.0, 1.0)


def test_normal_grid_moments_at_default_n():
    q = sample_quantile(ReferenceDistribution.normal(2.0, 3.0), 10_000)
    assert abs(grid_mean(q) - 2.0) < 1e-11
    assert abs(grid_std(q) - 3.0) < 3e-4


def test_decomposed_requires_target_moments():
    normal = ReferenceDistribution.normal(0.0, 1.0)
    g = sample_quantile(normal, 100)
    with pytest.raises(MomentMismatch):
        wasserstein2_sq_decomposed(normal, g, MomentTarget(5.0, 1.0))


def test_decomposed_matches_direct_for_empirical():
    rng = np.random.default_rng(5)
    ref = ReferenceDistribution.empirical(rng.normal(1.0, 2.0, 400))
    t = MomentTarget(0.5, 1.5)
    g = standardize_to(sample_quantile(ref, 300), t)
    direct = wasserstein2_sq(sample_quantile(ref, 300), g)
    assert abs(wasserstein2_sq_decomposed(ref, g, t) - direct) < 1e-8 * max(1, direct)


def test_load_samples_plain_column(tmp_path):
    p = tmp_path / "v.csv"
    p.write_text("1.5\n2.5\n-3.0\n")
    np.testing.assert_array_equal(load_samples_csv(p), [1.5, 2.5, -3.0])


def test_load_samples_loss_header(tmp_path):
    p = tmp_path / "v.csv"
    p.write_text("id,LOSS,weight\n1,10.5,0.2\n2,-4,0.8\n")
    np.testing.assert_array_equal(load_samples_csv(p), [10.5, -4.0])


def test_load_samples_reports_bad_line(tmp_path):
    p = tmp_path / "v.csv"
    p.write_text("1.0\nnot-a-number\n3.0\n")
    with pytest.raises(IngestError, match="line 2"):
        load_samples_csv(p)


def test_load_samples_needs_two_values(tmp_path):
    p = tmp_path / "v.csv"
    p.write_text("1.0\n")
    with pytest.raises(IngestError):
        load_samples_csv(p)


def test_tabulated_quantile_matches_sorted_table():
    vals = np.array([-2.0, -0.5, 0.25, 4.0])
    ref = ReferenceDistribution.tabulated(QuantileGrid(vals))
    np.testing.assert_array_equal(sample_quantile(ref, 4).values, vals)
