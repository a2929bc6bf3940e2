import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wassrisk.isotonic import IsotonicResult, _finalize, isotonic_project, projection_gap


def naive_pava(values: np.ndarray) -> IsotonicResult:
    """Quadratic reference: repeatedly merge the first adjacent inversion.

    Shares _finalize with the fast path so both emit the same canonical
    block levels; only the pooling order differs.
    """
    spans = [(i, i + 1) for i in range(values.size)]
    while True:
        levels = [math.fsum(values[s:e]) / (e - s) for s, e in spans]
        bad = next(
            (j for j in range(len(levels) - 1) if levels[j] > levels[j + 1]), None)
        if bad is None:
            break
        spans[bad] = (spans[bad][0], spans[bad + 1][1])
        del spans[bad + 1]
    return _finalize(values, spans)


def random_vectors(max_n=200, scale=100):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.floats(-scale, scale, allow_nan=False), min_size=n, max_size=n)
    ).map(np.asarray)


def test_monotone_input_is_identity():
    v = np.array([1.0, 2.0, 3.0])
    out = isotonic_project(v)
    np.testing.assert_array_equal(out.projected, v)
    assert out.blocks == ((0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0))


def test_single_pooled_pair():
    out = isotonic_project([2.0, 1.0])
    np.testing.assert_array_equal(out.projected, [1.5, 1.5])
    assert out.blocks == ((0, 2, 1.5),)


def test_three_point_pool():
    out = isotonic_project([3.0, 1.0, 2.0])
    np.testing.assert_array_equal(out.projected, [2.0, 2.0, 2.0])


def test_ties_untouched():
    v = np.array([1.0, 1.0, 2.0, 2.0])
    np.testing.assert_array_equal(isotonic_project(v).projected, v)


def test_rejects_empty_and_non_finite():
    with pytest.raises(ValueError):
        isotonic_project([])
    with pytest.raises(ValueError):
        isotonic_project([0.0, np.nan])


def test_projection_gap_examples():
    v = [2.0, 1.0]
    assert projection_gap(v, isotonic_project(v)) == 0.25
    w = [3.0, 1.0, 2.0]
    assert abs(projection_gap(w, isotonic_project(w)) - 2.0 / 3.0) < 1e-15
    m = [1.0, 2.0]
    assert projection_gap(m, isotonic_project(m)) == 0.0


@settings(max_examples=150, deadline=None)
@given(random_vectors())
def test_matches_naive_reference_exactly(v):
    fast = isotonic_project(v)
    slow = naive_pava(v)
    np.testing.assert_array_equal(fast.projected, slow.projected)
    assert fast.blocks == slow.blocks


@settings(max_examples=150, deadline=None)
@given(random_vectors())
def test_core_invariants(v):
    out = isotonic_project(v)
    p = out.projected
    assert np.all(np.diff(p) >= 0.0)
    # idempotence
    np.testing.assert_array_equal(isotonic_project(p).projected, p)
    # mean preservation
    scale = max(1.0, np.abs(v).max())
    assert abs(math.fsum(p) - math.fsum(v)) < 1e-12 * scale * v.size
    # self-inner-product identity <r,r> = <v,r>
    rr = float(np.dot(p, p))
    vr = float(np.dot(v, p))
    assert abs(rr - vr) <= 1e-10 * max(1.0, abs(rr))


@settings(max_examples=150, deadline=None)
@given(random_vectors())
def test_block_structure(v):
    out = isotonic_project(v)
    prev_end = 0
    for s, e, level in out.blocks:
        assert s == prev_end and e > s
        prev_end = e
        assert np.all(out.projected[s:e] == level)
        assert abs(level - math.fsum(v[s:e]) / (e - s)) < 1e-12 * max(1.0, abs(level))
    assert prev_end == v.size
    levels = [b[2] for b in out.blocks]
    assert all(a <= b for a, b in zip(levels, levels[1:]))


@settings(max_examples=100, deadline=None)
@given(random_vectors(max_n=60), st.randoms(use_true_random=False))
def test_best_approximation(v, rnd):
    out = isotonic_project(v)
    d_hat = float(np.sum((v - out.projected) ** 2))
    lo, hi = v.min() - 1.0, v.max() + 1.0
    for _ in range(20):
        r = np.sort([rnd.uniform(lo, hi) for _ in range(v.size)])
        d_r = float(np.sum((v - r) ** 2))
        assert d_hat <= d_r + 1e-9


def test_large_random_vector_against_naive():
    rng = np.random.default_rng(3)
    v = rng.normal(size=500) * 10
    fast = isotonic_project(v)
    slow = naive_pava(v)
    np.testing.assert_array_equal(fast.projected, slow.projected)
