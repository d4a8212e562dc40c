import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import exact_fit_dataset, random_dataset
from olsaudit.net import (
    NetConfig,
    build_residual_net,
    evaluate_net,
    net_upper_bound,
    residual_net,
    stability_at_lambda,
)
from olsaudit.ols import Dataset, is_zero_treatment_solution, residuals


def _vertex_enum_V(ds, lam):
    """Max of sum(w) over basic feasible points of {A w = 0, 0 <= w <= 1}."""
    r = residuals(ds, lam)
    A = (ds.X * r[:, None]).T
    n, d = ds.n, ds.d
    best = 0.0
    for size in range(d + 1):
        for basis in itertools.combinations(range(n), size):
            rest = [i for i in range(n) if i not in basis]
            for bits in itertools.product((0.0, 1.0), repeat=len(rest)):
                w = np.zeros(n)
                w[rest] = bits
                if size:
                    AB = A[:, list(basis)]
                    xb, *_ = np.linalg.lstsq(AB, -A @ w, rcond=None)
                    w[list(basis)] = xb
                if np.all(w >= -1e-9) and np.all(w <= 1 + 1e-9) and np.abs(A @ w).max() <= 1e-9:
                    best = max(best, w.sum())
    return best


def test_symmetric_pair_keeps_everything():
    ds = Dataset([[1.0], [1.0]], [1.0, -1.0])
    cand = stability_at_lambda(ds, [])
    assert cand.V == pytest.approx(2.0)
    np.testing.assert_allclose(cand.w, [1.0, 1.0])
    assert net_upper_bound(ds).value == pytest.approx(0.0, abs=1e-9)


def test_all_ones_forces_zero_weight():
    ds = Dataset(np.ones((5, 1)), np.ones(5))
    assert stability_at_lambda(ds, []).V == pytest.approx(0.0, abs=1e-12)
    assert net_upper_bound(ds).value == 5.0


def test_V_matches_vertex_enumeration():
    ds = random_dataset(3, n=8, d=2)
    for lam in ([0.0], [0.7], [-1.3]):
        assert stability_at_lambda(ds, lam).V == pytest.approx(_vertex_enum_V(ds, lam), abs=1e-8)


def test_zero_directions_gives_empty_net():
    assert build_residual_net(random_dataset(0), NetConfig(0)) == []


def test_d1_net_is_single_empty_lambda():
    ds = Dataset(np.ones((4, 1)), [1.0, 2.0, -1.0, 0.5])
    net = build_residual_net(ds, NetConfig(50))
    assert len(net) == 1 and net[0].shape == (0,)


def test_net_points_follow_their_directions():
    ds = random_dataset(11, n=6, d=2)
    net = residual_net(ds, NetConfig(200, seed=4))
    assert net.shift is None and net.lambdas.shape[0] > 0
    for lam, m in zip(net.lambdas, net.directions):
        r = residuals(ds, lam)
        u = net.U @ m
        a, b = r / np.linalg.norm(r), u / np.linalg.norm(u)
        assert min(np.linalg.norm(a - b), np.linalg.norm(a + b)) <= 1e-8


def test_degenerate_response_is_perturbed_and_undone():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((7, 3))
    ds = Dataset(X, np.zeros(7))
    net = residual_net(ds, NetConfig(30))
    assert net.shift is not None and net.lambdas.shape == (30, 2)
    # the shift cancels in the residual, so the direction identity holds against the original y
    for lam, m in zip(net.lambdas, net.directions):
        r, u = residuals(ds, lam), net.U @ m
        a, b = r / np.linalg.norm(r), u / np.linalg.norm(u)
        assert min(np.linalg.norm(a - b), np.linalg.norm(a + b)) <= 1e-8


def test_exact_fit_shortcut():
    ds, lam = exact_fit_dataset(2)
    b = net_upper_bound(ds)
    assert b.value == 0.0 and b.certificate["exact_fit"]
    np.testing.assert_allclose(b.certificate["lambda"], lam, atol=1e-9)


def test_warm_chain_matches_cold_solves():
    ds = random_dataset(5, n=40, d=3)
    net = residual_net(ds, NetConfig(60, seed=1))
    warm = evaluate_net(ds, net)
    cold = evaluate_net(ds, net, method="highs")
    np.testing.assert_allclose(warm, cold, atol=1e-7)
    np.testing.assert_allclose(evaluate_net(ds, net, n_jobs=3), warm, atol=1e-9)


def test_frozen_values():
    # regression values computed once by this implementation (HiGHS agrees)
    ds = random_dataset(7, n=12, d=2)
    b = net_upper_bound(ds, NetConfig(500, seed=0))
    assert b.value == pytest.approx(0.4711734527418905, abs=1e-8)
    assert net_upper_bound(ds, NetConfig(500, seed=0), method="highs").value == pytest.approx(b.value, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_certificate_reverifies(seed):
    ds = random_dataset(seed, n=15, d=2)
    b = net_upper_bound(ds, NetConfig(100, seed=seed))
    cert = b.certificate
    w = cert["w"]
    assert np.all(w >= -1e-9) and np.all(w <= 1 + 1e-9)
    assert is_zero_treatment_solution(ds, cert["lambda"], w)
    assert b.value == pytest.approx(ds.n - w.sum(), abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_more_directions_never_hurt(seed):
    ds = random_dataset(seed, n=20, d=3)
    small = net_upper_bound(ds, NetConfig(50, seed=seed)).value
    big = net_upper_bound(ds, NetConfig(200, seed=seed)).value
    assert big <= small + 1e-7


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.01, 100.0))
def test_scale_and_permutation_invariance(seed, c):
    ds = random_dataset(seed, n=20, d=2)
    ref = net_upper_bound(ds, NetConfig(100)).value
    scaled_y = Dataset(ds.X, c * ds.y)
    X1 = ds.X.copy()
    X1[:, 0] *= c
    scaled_x = Dataset(X1, ds.y)
    perm = np.random.default_rng(seed).permutation(ds.n)
    assert net_upper_bound(scaled_y, NetConfig(100)).value == pytest.approx(ref, abs=1e-6)
    assert net_upper_bound(scaled_x, NetConfig(100)).value == pytest.approx(ref, abs=1e-6)
    assert net_upper_bound(ds.subset(perm), NetConfig(100)).value == pytest.approx(ref, abs=1e-6)
