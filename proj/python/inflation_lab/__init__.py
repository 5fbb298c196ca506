"""Growth exponents of two-patch populations in switching environments."""

from ._core import (
    InvalidArgument,
    InvariantDensity,
    NoRoot,
    NumericalFailure,
    a_plus,
    critical_migration,
    cumulative_cases,
    delta_closed,
    delta_limit_T_inf,
    delta_pdmp_quadrature,
    delta_quadrature,
    delta_spectral,
    flow_exact,
    holt_linear_growth,
    lyapunov_polar,
    no_inflation_T_bound,
    p_plus,
    period_map,
    periodic_orbit,
    predict_persistence,
    simulate_pdmp,
    simulate_sape,
    threshold_T_star,
    threshold_m_star,
    v_star,
)

__all__ = [name for name in dir() if not name.startswith("_")]
