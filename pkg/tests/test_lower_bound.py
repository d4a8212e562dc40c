import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import exact_fit_dataset, random_dataset
from olsaudit.lower_bound import (
    LowerBoundConfig,
    lower_bound_regions,
    lp_lower_bound,
    region_lower_data,
    residual_mass_bound,
)
from olsaudit.net import NetConfig, net_upper_bound
from olsaudit.ols import Dataset, ols_error_norm
from olsaudit.oracle import brute_force_integral


def test_exact_fit_gives_zero():
    ds, _ = exact_fit_dataset(1)
    assert lp_lower_bound(ds).value == 0.0


def test_all_ones_is_tight():
    ds = Dataset(np.ones((5, 1)), np.ones(5))
    b = lp_lower_bound(ds)
    assert b.value == pytest.approx(5.0, abs=1e-9)
    assert b.certificate["num_regions"] == 1


def test_residual_mass_bound_hand_cases():
    Q = np.array([1.0, 2.0, 3.0, 4.0])
    # retaining weight 3 costs at least 1 + 2 + 3 = 6 > 5, so more than 4 - 3 = 1 must go
    assert residual_mass_bound(Q, 5.0) == 1
    assert residual_mass_bound(Q, 100.0) == 0
    assert residual_mass_bound(Q, 0.5) == 3
    assert residual_mass_bound(np.zeros(3), 0.0) == 0


def test_region_data_value_dominates_both_parts():
    ds = random_dataset(2, n=10, d=2)
    M2 = ols_error_norm(ds) ** 2
    for reg in lower_bound_regions(ds, LowerBoundConfig()):
        dd = region_lower_data(ds, reg, M2)
        assert dd.value == max(dd.S_hat_R, dd.N_hat_R)
        assert dd.S_hat_R >= 0 and dd.N_hat_R >= 0


def test_frozen_value():
    ds = random_dataset(4, n=12, d=2)
    b = lp_lower_bound(ds)
    assert b.value == pytest.approx(2.1324209411826947, abs=1e-8)
    assert lp_lower_bound(ds, method="highs").value == pytest.approx(b.value, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_lower_never_exceeds_upper_or_integral(seed):
    ds = random_dataset(seed, n=12, d=2)
    low = lp_lower_bound(ds).value
    assert low <= net_upper_bound(ds, NetConfig(300)).value + 1e-6
    integral = brute_force_integral(ds).integral_stability
    assert low <= integral + 1e-6


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000))
def test_extra_thresholds_refine(seed):
    # more hyperplanes refine the partition, which can only raise the minimum
    ds = random_dataset(seed, n=10, d=2)
    M = ols_error_norm(ds)
    coarse = lp_lower_bound(ds).value
    fine = lp_lower_bound(ds, LowerBoundConfig(thresholds=(0.0, M / 3, -M / 3))).value
    assert fine >= coarse - 1e-7


def test_config_validation():
    with pytest.raises(ValueError):
        LowerBoundConfig(m=0)
    with pytest.raises(ValueError):
        LowerBoundConfig(thresholds=(np.inf,))
