"""Neyman-Pearson threshold optimization for hard-decision cooperative sensing."""

from ._core import (
    ConvergenceError,
    ConvexityReport,
    EmpiricalMetrics,
    FusionRule,
    GlobalMetrics,
    OptimizationResult,
    SensingConfig,
    ThresholdPair,
    TrialConfig,
    ValidationReport,
    alpha_matched_pair,
    avg_pd,
    binary_search_opt,
    convexity_check,
    evaluate_pair,
    exhaustive_opt,
    global_qd,
    global_qf,
    global_tail_direct,
    inv_reg_inc_beta,
    inv_zeta,
    lambda_for_alpha,
    local_pd,
    local_pf,
    marcum_q,
    objective,
    pf_for_alpha,
    phi,
    reg_inc_beta,
    simulate,
    validate_against_analytic,
    zeta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
