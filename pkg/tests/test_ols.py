import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from olsaudit.ols import (
    Dataset,
    is_zero_treatment_solution,
    normal_residual,
    ols_error_norm,
    residuals,
    treatment_coefficient,
    weighted_ols,
    zero_treatment_fit,
)

from conftest import exact_fit_dataset, random_dataset


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(np.ones((3, 2)), np.ones(4))
    with pytest.raises(ValueError):
        Dataset(np.array([[1.0, np.nan]]), [1.0])
    with pytest.raises(ValueError):
        Dataset(np.ones((2, 2)), np.ones(2), ["a"])
    ds = Dataset([1.0, 2.0, 3.0], [1, 2, 3])
    assert ds.X.shape == (3, 1) and ds.controls.shape == (3, 0)
    with pytest.raises(ValueError):
        ds.X[0, 0] = 5.0  # read-only


def test_weighted_ols_matches_lstsq():
    ds = random_dataset(1, n=30, d=3)
    beta = weighted_ols(ds)
    ref = np.linalg.lstsq(ds.X, ds.y, rcond=None)[0]
    np.testing.assert_allclose(beta, ref, atol=1e-12)


def test_weighted_ols_equals_row_subset():
    ds = random_dataset(2, n=20, d=2)
    w = np.ones(20)
    w[[3, 7, 11]] = 0.0
    sub = ds.subset(np.flatnonzero(w))
    np.testing.assert_allclose(weighted_ols(ds, w), weighted_ols(sub), atol=1e-12)


def test_empty_weights_give_zero():
    ds = random_dataset(3)
    np.testing.assert_array_equal(weighted_ols(ds, np.zeros(ds.n)), np.zeros(ds.d))


def test_residual_convention():
    ds = Dataset([[1.0, 2.0], [0.0, 1.0]], [5.0, 1.0])
    # fit minus response with the treatment pinned to zero
    np.testing.assert_allclose(residuals(ds, [3.0]), [1.0, 2.0])
    with pytest.raises(ValueError):
        residuals(ds, [1.0, 2.0])


def test_zero_treatment_fit_detects_exact_fit():
    ds, lam = exact_fit_dataset()
    got = zero_treatment_fit(ds)
    assert got is not None
    assert is_zero_treatment_solution(ds, got)
    assert zero_treatment_fit(random_dataset(4)) is None


def test_ols_error_norm_interpolating():
    ds, _ = exact_fit_dataset()
    assert ols_error_norm(ds) < 1e-10


def test_treatment_coefficient_two_points():
    ds = Dataset([[1.0], [1.0]], [1.0, -1.0])
    assert treatment_coefficient(ds) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.01, 100.0))
def test_normal_equations_hold_for_random_weights(seed, scale):
    ds = random_dataset(seed, n=12, d=3)
    rng = np.random.default_rng(seed + 1)
    w = rng.random(12)
    beta = weighted_ols(Dataset(ds.X, scale * ds.y), w)
    assert np.max(np.abs(normal_residual(Dataset(ds.X, scale * ds.y), beta, w))) < 1e-8 * (1 + scale)
