"""Capped-l1 sparse regression solved by smoothing proximal gradient with extrapolation."""

from ._spge import (
    ConfigError,
    DivergenceError,
    Instance,
    ParseError,
    check_grad,
    check_monitor,
    check_prox,
    check_rate,
    d_select,
    gen_censored,
    gen_l1_regression,
    gen_toy,
    load_instance,
    lower_bound_ok,
    phi,
    plus_tilde,
    prox,
    solve,
    theta_tilde,
)

__all__ = [
    "ConfigError",
    "DivergenceError",
    "Instance",
    "ParseError",
    "check_grad",
    "check_monitor",
    "check_prox",
    "check_rate",
    "d_select",
    "gen_censored",
    "gen_l1_regression",
    "gen_toy",
    "load_instance",
    "lower_bound_ok",
    "phi",
    "plus_tilde",
    "prox",
    "solve",
    "theta_tilde",
]
