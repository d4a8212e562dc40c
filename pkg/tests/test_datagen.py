import math

import numpy as np
import pytest

from olsaudit.datagen import (
    COV_SHIFT,
    check_anti_concentration,
    gen_covariance_shift,
    gen_heterogeneous,
    gen_isotropic,
    generate,
    small_count,
    smooth_responses,
)
from olsaudit.ols import Dataset, weighted_ols, zero_treatment_fit


def test_heterogeneous_edges():
    ds = gen_heterogeneous(50, 0, seed=1)
    assert np.all(ds.X[:, 0] == 0)
    ds = gen_heterogeneous(50, 50, seed=1)
    np.testing.assert_array_equal(ds.y, ds.X[:, 0])
    ds = gen_heterogeneous(1000, 10, seed=2)
    assert ds.X.shape == (1000, 2)
    assert np.all(ds.X[10:, 0] == 0)
    assert abs(ds.X[:10, 0].mean() + 1) < 0.1
    with pytest.raises(ValueError):
        gen_heterogeneous(5, 6)


def test_isotropic():
    ds = gen_isotropic(1000, 3, 0.0, seed=0)
    np.testing.assert_allclose(weighted_ols(ds), np.ones(3), atol=1e-10)
    ds = gen_isotropic(1000, 3, 1.0, seed=0)
    assert np.all(np.abs(ds.X.mean(axis=0)) < 4 / math.sqrt(1000))
    with pytest.raises(ValueError):
        gen_isotropic(10, 2, -1.0)


def test_noiseless_isotropic_has_no_zero_treatment_fit():
    # the treatment matters: dropping nothing leaves beta_1 = 1
    assert zero_treatment_fit(gen_isotropic(50, 2, 0.0, seed=3)) is None


def test_covariance_shift_construction():
    bulk = gen_covariance_shift(1000, 0, seed=0, outliers=False)
    assert bulk.n == 1000
    emp = np.cov(bulk.X.T)
    assert np.linalg.norm(emp - COV_SHIFT) <= 0.1 * np.linalg.norm(COV_SHIFT)
    ds = gen_covariance_shift(seed=0)
    assert ds.n == 1000 + 30 + 1
    beta = weighted_ols(ds)
    assert abs(ds.X[-1] @ beta - ds.y[-1]) <= 1e-8
    assert beta[0] > 0
    np.testing.assert_allclose(ds.X[1000:1030], np.tile([0.2, -0.6], (30, 1)))
    np.testing.assert_allclose(ds.X[-1], [math.sqrt(1000)] * 2)


def test_determinism_and_dispatch():
    a = generate("isotropic", seed=4, n=20, d=2)
    b = gen_isotropic(20, 2, seed=4)
    np.testing.assert_array_equal(a.X, b.X)
    assert not np.array_equal(gen_isotropic(20, 2, seed=5).X, a.X)
    with pytest.raises(ValueError):
        generate("nope")


def test_smooth_responses():
    ds = gen_isotropic(10_000, 2, 1.0, seed=0)
    tiny = smooth_responses(ds, 1e-12, seed=1)
    assert np.max(np.abs(tiny.y - ds.y)) < 1e-10
    noisy = smooth_responses(ds, 2.0, seed=1)
    assert np.var(noisy.y - ds.y) == pytest.approx(4.0, rel=0.05)
    np.testing.assert_array_equal(noisy.X, ds.X)
    with pytest.raises(ValueError):
        smooth_responses(ds, 0.0)


def test_falsifier_finds_duplicate_hyperplane():
    rng = np.random.default_rng(0)
    n, eps = 100, 0.1
    X = rng.standard_normal((n, 2))
    y = rng.standard_normal(n)
    normal = np.array([1.0, -2.0, 1.0])
    dup = math.ceil(eps * n) + 1
    # rows of [X, y] orthogonal to the normal: exact zeros of the augmented projection
    y[:dup] = 2.0 * X[:dup, 1] - X[:dup, 0]
    ds = Dataset(X, y)
    rep = check_anti_concentration(ds, "B", eps, 0.05, trials=500, seed=0)
    assert rep.falsified
    assert small_count(ds, "B", rep.witness_beta, 0.05) > eps * n
    assert small_count(ds, "B", normal, 0.05) >= dup


def test_generic_gaussian_not_falsified():
    ds = gen_isotropic(1000, 2, 1.0, seed=7)
    rep = check_anti_concentration(ds, "B", 0.1, 0.025, trials=10_000, seed=0)
    assert rep.verdict == "not-falsified" and rep.worst_fraction_found <= 0.1


def test_delta_zero_trivially_passes():
    ds = gen_heterogeneous(100, 10, seed=0)
    assert check_anti_concentration(ds, "A", 0.1, 0.0).verdict == "not-falsified"


def test_falsified_reports_recount():
    ds = gen_heterogeneous(200, 10, seed=0)
    rep = check_anti_concentration(ds, "A", 0.1, 0.1, trials=200, seed=0)
    if rep.falsified:
        assert small_count(ds, "A", rep.witness_beta, 0.1) > 0.1 * ds.n


def test_smoothing_passes_falsifier():
    # smoothed responses keep the small-residual fraction on the order of 2d / n
    for seed in range(10):
        rng = np.random.default_rng(seed)
        base = Dataset(rng.standard_normal((200, 2)), np.zeros(200))
        ds = smooth_responses(base, 1.0, seed=seed)
        rep = check_anti_concentration(ds, "A", 0.1, 0.01, trials=200, seed=seed)
        assert rep.verdict == "not-falsified"
