"""Provable upper and lower bounds on how much data must be dropped to zero an OLS coefficient."""

__version__ = "0.1.0"

from .bounds import LOWER, UPPER, StabilityBound
from .datagen import (
    AcReport,
    check_anti_concentration,
    gen_covariance_shift,
    gen_heterogeneous,
    gen_isotropic,
    smooth_responses,
)
from .greedy import GreedyResult, greedy_upper_bound, influence
from .lower_bound import LowerBoundConfig, RegionLowerData, lp_lower_bound
from .lp_approx import BOTTOM, ESTIMATE, LpApproxConfig, LpApproxResult, lp_approx_stability
from .net import LambdaCandidate, NetConfig, build_residual_net, net_upper_bound, stability_at_lambda
from .ols import Dataset, residuals, treatment_coefficient, weighted_ols
from .oracle import OracleResult, brute_force_integral, fractional_upper_via_grid
from .regions import Hyperplane, Region, build_partition_equations, generate_regions, representative, residual_interval

__all__ = [name for name in dir() if not name.startswith("_")]
