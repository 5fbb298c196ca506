import math

import pytest

import inflation_lab as il


def test_three_routes_agree():
    for m, T in [(0.2, 1.0), (1.0, 5.0), (0.05, 12.0)]:
        closed = il.delta_closed(0.5, m, T)
        assert il.delta_spectral(0.5, m, T) == pytest.approx(closed, abs=1e-12)
        assert il.delta_quadrature(0.5, m, T) == pytest.approx(closed, abs=1e-10)


def test_no_dispersal_is_pure_decline():
    assert il.delta_closed(0.5, 0.0, 3.0) == -1.0


def test_threshold():
    m_star = il.threshold_m_star(0.5, 20.0)
    assert il.delta_closed(0.5, m_star, 20.0) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(il.NoRoot):
        il.threshold_m_star(0.5, 1.0)


def test_invalid_arguments_raise_value_error():
    with pytest.raises(ValueError):
        il.delta_closed(2.0, 0.1, 1.0)


def test_orbit():
    lo, hi = il.periodic_orbit(0.2, 3.0)
    assert lo == pytest.approx(-hi)
    assert hi == pytest.approx(il.p_plus(0.2, 3.0), abs=1e-10)
    ((a, b), (c, d)) = il.period_map(0.5, 0.2, 3.0)
    assert min(a, b, c, d) > 0


def test_density():
    rho = il.InvariantDensity(0.2, 2.5)
    assert rho.mass(-rho.v_plus, rho.v_plus) == pytest.approx(1.0, abs=1e-10)
    assert not rho.bounded_at_endpoints
    assert rho.to_csv(5).splitlines()[0] == "v,rho_plus,rho_minus,rho"


def test_pdmp_reproducible():
    a = il.simulate_pdmp(0.5, 0.2, 0.4, 20000.0, seed=7)
    b = il.simulate_pdmp(0.5, 0.2, 0.4, 20000.0, seed=7)
    assert a == b
    assert a["method"] == "MonteCarlo" and a["seed"] == 7
    ref = il.delta_pdmp_quadrature(0.5, 0.2, 2.5)
    assert abs(a["value"] - ref) < 5 * a["stderr"]


def test_sape_without_jitter_is_periodic():
    r = il.simulate_sape(0.5, 0.2, 4.0, 0.0, 2000.0, seed=1)
    assert r["value"] == pytest.approx(il.delta_closed(0.5, 0.2, 4.0), abs=1e-9)


def test_sir():
    cases = il.cumulative_cases([0.0, 0.05])
    assert all(math.isfinite(c) and c > 0 for c in cases)
    assert cases[1] > cases[0]
    assert il.holt_linear_growth(0.1) > 0
