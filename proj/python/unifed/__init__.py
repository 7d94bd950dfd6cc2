"""Unifed distribution, GLM fitting, and data aggregation."""

from ._core import (
    CapacityError,
    ConvergenceError,
    DataError,
    DesignError,
    DomainError,
    __version__,
    beta_density,
    beta_mean_variance,
    beta_params_from_shapes,
    cdf,
    chi_square_survival,
    density,
    density_general,
    fit_csv,
    irwin_hall_exact,
    irwin_hall_exact_str,
    irwin_hall_naive,
    kappa,
    kappa_double_prime,
    kappa_prime,
    kappa_prime_inverse,
    log_likelihood,
    mean_variance,
    mle_theta,
    normal_two_sided_p,
    quantile,
    run_cli,
    sample,
    unit_deviance,
    variance_function,
)

__all__ = [
    "CapacityError",
    "ConvergenceError",
    "DataError",
    "DesignError",
    "DomainError",
    "__version__",
    "beta_density",
    "beta_mean_variance",
    "beta_params_from_shapes",
    "cdf",
    "chi_square_survival",
    "density",
    "density_general",
    "fit_csv",
    "irwin_hall_exact",
    "irwin_hall_exact_str",
    "irwin_hall_naive",
    "kappa",
    "kappa_double_prime",
    "kappa_prime",
    "kappa_prime_inverse",
    "log_likelihood",
    "mean_variance",
    "mle_theta",
    "normal_two_sided_p",
    "quantile",
    "run_cli",
    "sample",
    "unit_deviance",
    "variance_function",
]
