import numpy as np
import pytest

from wassrisk import (
    DistortionSpec,
    QuantileGrid,
    SamplingExhausted,
    VerificationFailed,
    grid_mean,
    grid_std,
    sample_quantile,
    wasserstein2_sq,
)
from wassrisk.oracle import OracleConfig, projected_ascent, sample_feasible, verify
from wassrisk.oracle import _sample_values
from wassrisk.solver import (
    delta_star,
    epsilon_bounds,
    objective_eval,
    solve_ball,
    solve_moment_set,
)
from tests.conftest import problem, smoothstep_table

CV7 = DistortionSpec.cvar(0.7)
FAST = OracleConfig(samples=2_000, ascent_starts=5, seed=3)


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(samples=0)
    with pytest.raises(ValueError):
        OracleConfig(step=-0.1)
    with pytest.raises(ValueError):
        OracleConfig(gap_tol=0.0)


def test_sample_feasible_moments():
    rng = np.random.default_rng(11)
    spec = problem(CV7, mu=0.5, sigma=2.0, n=300)
    for _ in range(20):
        q = sample_feasible(spec, rng)
        assert abs(grid_mean(q) - 0.5) < 1e-10
        assert abs(grid_std(q) - 2.0) < 1e-10
        assert np.all(np.diff(q.values) >= 0.0)


def test_sample_feasible_respects_ball():
    rng = np.random.default_rng(7)
    spec = problem(CV7, delta=0.2, eps=0.3, n=300)
    f = sample_quantile(spec.reference, 300)
    for _ in range(20):
        q = sample_feasible(spec, rng)
        assert wasserstein2_sq(f, q) <= 0.3 + 1e-12


def test_sample_feasible_tight_ball():
    spec0 = problem(CV7, n=300)
    eps_min, _ = epsilon_bounds(spec0)
    spec = problem(CV7, delta=0.2, eps=eps_min + 1e-12, n=300)
    f = sample_quantile(spec.reference, 300)
    rng = np.random.default_rng(5)
    # the sampler either collapses onto the aligned grid or gives up
    try:
        q = sample_feasible(spec, rng)
    except SamplingExhausted:
        return
    assert wasserstein2_sq(f, q) <= eps_min + 1e-12


def test_sampling_alone_lands_close():
    # raw draws (no ascent) must already get within 5e-2 of the closed form
    spec = problem(CV7, n=200)
    from wassrisk.solver import _resolve, _grid_objective
    ws = _resolve(spec)
    closed = solve_moment_set(spec).value
    rng = np.random.default_rng(17)
    best = -np.inf
    for _ in range(10_000):
        v, _, _ = _grid_objective(ws, _sample_values(ws, None, rng))
        best = max(best, v)
    assert best <= closed + 1e-9
    assert closed - best <= 5e-2


def test_ascent_never_decreases_objective():
    spec = problem(CV7, delta=0.3, eps=0.2, n=200)
    rng = np.random.default_rng(23)
    cfg = OracleConfig(ascent_iters=200, samples=1)
    for _ in range(5):
        start = sample_feasible(spec, rng)
        end = projected_ascent(spec, start, cfg)
        assert objective_eval(spec, end) >= objective_eval(spec, start) - 1e-12


def test_ascent_fixed_point_at_optimum():
    spec = problem(CV7, delta=0.3, eps=0.2, n=200)
    sol = solve_ball(spec)
    end = projected_ascent(spec, sol.optimal_quantile, OracleConfig(samples=1))
    v = objective_eval(spec, end)
    assert sol.value - 1e-12 <= v <= sol.value + 1e-9


def test_ascent_escapes_aligned_start():
    # starting from the reference-aligned grid, delta = 0, the climb must
    # reach the moment-set optimum mu + sigma * sigma0
    spec = problem(CV7, n=200)
    f = sample_quantile(spec.reference, 200)
    end = projected_ascent(spec, f, OracleConfig(samples=1))
    closed = solve_moment_set(spec).value
    assert abs(objective_eval(spec, end) - closed) < 1e-3


def test_ascent_boundary_regime_sits_on_sphere():
    spec0 = problem(CV7, n=200)
    dstar = delta_star(spec0, 0.16)
    spec = problem(CV7, delta=0.5 * dstar, eps=0.16, n=200)
    f = sample_quantile(spec.reference, 200)
    rng = np.random.default_rng(29)
    end = projected_ascent(spec, sample_feasible(spec, rng),
                           OracleConfig(samples=1))
    assert abs(wasserstein2_sq(f, end) - 0.16) < 1e-3


def test_verify_passes_moment_set():
    rep = verify(problem(CV7, delta=0.25, n=200), FAST)
    assert rep.passed
    assert rep.violations == 0
    assert rep.gap <= FAST.gap_tol
    assert rep.best_value <= rep.closed_form_value + 1e-9


def test_verify_passes_general_ball():
    spec = problem(smoothstep_table(200), delta=0.15, eps=0.2, n=200)
    rep = verify(spec, FAST)
    assert rep.passed
    assert rep.gap <= FAST.gap_tol


def test_verify_reproducible():
    a = verify(problem(CV7, delta=0.4, eps=0.16, n=200), FAST)
    b = verify(problem(CV7, delta=0.4, eps=0.16, n=200), FAST)
    assert a.best_value == b.best_value
    assert a.gap == b.gap
    np.testing.assert_array_equal(a.best_grid.values, b.best_grid.values)


def test_verify_catches_inflated_value():
    cfg = OracleConfig(samples=500, ascent_starts=3, corrupt_offset=0.5)
    with pytest.raises(VerificationFailed) as exc:
        verify(problem(CV7, n=200), cfg)
    rep = exc.value.report
    assert not rep.passed
    assert rep.gap > cfg.gap_tol


def test_verify_catches_deflated_value():
    cfg = OracleConfig(samples=500, ascent_starts=3, corrupt_offset=-0.5)
    with pytest.raises(VerificationFailed) as exc:
        verify(problem(CV7, n=200), cfg)
    assert exc.value.report.violations > 0
