"""Closed-form consumption functions for the deterministic income-fluctuation problem."""

from ._core import (
    FIGURE_PARAMS,
    ConvergenceError,
    DomainError,
    ModelParams,
    PiecewiseLinearPolicy,
    ValidationError,
    approximation_error_report,
    consumption_approx_small_r,
    consumption_now_r0,
    consumption_path,
    consumption_unconstrained,
    crra_utility,
    discrete_policy,
    h_approx_small_r,
    h_closed_r0,
    h_numeric,
    hessian_closed,
    jacobian_closed,
    lambert_w0,
    lambert_wm1,
    mu,
    mu_discrete,
    mu_prime,
    pdv_utility,
    run_checks,
    validate,
    value_upper_bound,
)

__all__ = [
    "FIGURE_PARAMS",
    "ConvergenceError",
    "DomainError",
    "ModelParams",
    "PiecewiseLinearPolicy",
    "ValidationError",
    "approximation_error_report",
    "consumption_approx_small_r",
    "consumption_now_r0",
    "consumption_path",
    "consumption_unconstrained",
    "crra_utility",
    "discrete_policy",
    "h_approx_small_r",
    "h_closed_r0",
    "h_numeric",
    "hessian_closed",
    "jacobian_closed",
    "lambert_w0",
    "lambert_wm1",
    "mu",
    "mu_discrete",
    "mu_prime",
    "pdv_utility",
    "run_checks",
    "validate",
    "value_upper_bound",
]
