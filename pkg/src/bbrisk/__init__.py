"""Bivariate Brownian risk model with tax: simulation and numerical validation."""

from .closedform import (AsymptoticApprox, Branch, asymptotic_psi, bivariate_tail,
                         constant_nonpositive_a, constant_upper_bound, normal_cdf,
                         ruin_1d_finite, ruin_1d_infinite, ruin_1d_reflected_asym)
from .constant import (ConstantEstimate, FrontierSample, SupMode, estimate_constant,
                       sample_frontier, sample_sup_drifted_exact, staircase_exp_integral)
from .mc import (CompareConfig, ComparisonRow, Estimate, EstimatorKind,
                 compare_asymptotic, crude_mc, likelihood_mean, ruin_indicator,
                 tilted_mc)
from .model import (CanonicalProblem, ModelParams, canonical_from_params,
                    canonicalize, normalize_horizon)
from .paths import GridPath, SeedSpec, bridge_min_sample, drifted, reflect, running_inf, sample_bm

__all__ = [
    "AsymptoticApprox", "Branch", "CanonicalProblem", "CompareConfig",
    "ComparisonRow", "ConstantEstimate", "Estimate", "EstimatorKind",
    "FrontierSample", "GridPath", "ModelParams", "SeedSpec", "SupMode",
    "asymptotic_psi", "bivariate_tail", "bridge_min_sample",
    "canonical_from_params", "canonicalize", "compare_asymptotic",
    "constant_nonpositive_a", "constant_upper_bound", "crude_mc", "drifted",
    "estimate_constant", "likelihood_mean", "normal_cdf", "normalize_horizon",
    "reflect", "ruin_1d_finite", "ruin_1d_infinite", "ruin_1d_reflected_asym",
    "ruin_indicator",
    "running_inf", "sample_bm", "sample_frontier", "sample_sup_drifted_exact",
    "staircase_exp_integral", "tilted_mc",
]

__version__ = "0.1.0"
