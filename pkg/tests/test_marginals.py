import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudolom.errors import DomainError, InvalidSurvivalError
from pseudolom.generators import ExpRatio, Identity, Power, RecipExp
from pseudolom.marginals import (
    CustomSurvival,
    Exponential,
    GompertzLogistic,
    ParetoII,
    PseudoExponentialMarginal,
    UnivariateSurvival,
    distort,
    make_marginal,
    undistort,
)

CATALOG = [Exponential(2.0), ParetoII(3.0), GompertzLogistic(0.8, 1.5), GompertzLogistic(2.0, 0.7)]
IDS = ["exponential", "pareto2", "gompertz_lt1", "gompertz_gt1"]


@pytest.mark.parametrize("G", CATALOG, ids=IDS)
def test_survival_invariants(G):
    x = np.linspace(0, 20, 500)
    S = G.sf(x)
    assert G.sf(0.0) == 1.0
    assert np.all(np.diff(S) <= 0) and np.all(G.pdf(x) >= 0)
    u = np.linspace(1e-6, 1, 300)
    np.testing.assert_allclose(G.sf(G.isf(u)), u, atol=1e-10)
    np.testing.assert_allclose(G.cdf(x), 1 - S, atol=1e-14)


@pytest.mark.parametrize("G", CATALOG, ids=IDS)
def test_hazard_and_derivatives_by_differences(G):
    x = np.random.default_rng(0).uniform(0.01, 5, 100)
    eps = 1e-6
    fd_hazard = -(G.logsf(x + eps) - G.logsf(x - eps)) / (2 * eps)
    np.testing.assert_allclose(G.hazard(x), fd_hazard, rtol=1e-6, atol=1e-8)
    fd_pdf = -(G.sf(x + eps) - G.sf(x - eps)) / (2 * eps)
    np.testing.assert_allclose(G.pdf(x), fd_pdf, rtol=1e-6, atol=1e-9)
    fd_dpdf = (G.pdf(x + eps) - G.pdf(x - eps)) / (2 * eps)
    np.testing.assert_allclose(G.dpdf(x), fd_dpdf, rtol=1e-5, atol=1e-8)
    fd_dh = (G.hazard(x + eps) - G.hazard(x - eps)) / (2 * eps)
    np.testing.assert_allclose(G.dhazard(x), fd_dh, rtol=1e-5, atol=1e-8)


@pytest.mark.parametrize("G,g0", [(Exponential(2.0), 2.0), (ParetoII(3.0), 3.0),
                                  (GompertzLogistic(0.8, 1.5), 1.2)])
def test_density_at_zero(G, g0):
    assert G.pdf0 == pytest.approx(g0, rel=1e-14)
    assert -(G.sf(1e-7) - 1.0) / 1e-7 == pytest.approx(g0, rel=1e-5)


def test_gompertz_inverse_is_closed_form():
    G = GompertzLogistic(0.8, 1.5)
    u = np.linspace(0.01, 0.99, 9)
    np.testing.assert_allclose(G.isf(u), np.log(1 + (1 / u - 1) / 0.8) / 1.5, rtol=1e-13)


def test_x_max_truncation():
    for G in CATALOG:
        assert G.sf(G.x_max(1e-12)) <= 1.0001e-12 or G.x_max() == 1e8


@pytest.mark.parametrize("G", CATALOG, ids=IDS)
def test_squared_hazard_integral_closed_form_vs_quadrature(G):
    v = np.linspace(0.02, 0.99, 50)
    closed = G.squared_hazard_integral(v)
    quad = UnivariateSurvival.squared_hazard_integral(G, v)
    np.testing.assert_allclose(closed, quad, rtol=1e-8, atol=1e-8)


def test_pareto_j_display():
    v = np.linspace(0.05, 0.95, 10)
    np.testing.assert_allclose(ParetoII(3.0).squared_hazard_integral(v), 9 * (1 - v ** (1 / 3)), rtol=1e-12)


def test_distort_examples():
    E = Exponential(2.0)
    assert distort(Identity(), E) is E
    F = distort(ExpRatio(1.0), Exponential(1.0))
    assert F.sf(0.0) == 1.0
    assert F.pdf0 == pytest.approx(np.e / (np.e - 1))
    F = distort(RecipExp(2.0), ParetoII(3.0))
    assert F.sf(1.0) == pytest.approx(np.exp(-14.0), rel=1e-12)


def test_distorted_density_and_inverse():
    g = ExpRatio(0.7)
    F = distort(g, ParetoII(2.0))
    x = np.linspace(0.05, 8, 60)
    eps = 1e-6
    np.testing.assert_allclose(F.pdf(x), -(F.sf(x + eps) - F.sf(x - eps)) / (2 * eps), rtol=1e-6)
    u = np.linspace(0.01, 0.99, 30)
    np.testing.assert_allclose(F.sf(F.isf(u)), u, atol=1e-12)


def test_undistort_examples():
    F = Exponential(3.0)
    assert undistort(Identity(), F) is F
    G = undistort(Power(2.0), Exponential(2.0))
    x = np.linspace(0, 10, 50)
    np.testing.assert_allclose(G.sf(x), np.exp(-x), rtol=1e-12)
    theta, gam = 0.8, 0.5
    G = undistort(ExpRatio(theta), Exponential(gam))
    np.testing.assert_allclose(G.sf(x), np.log(np.expm1(theta) * np.exp(-gam * x) + 1) / theta, rtol=1e-12)
    assert G.pdf0 == pytest.approx(gam * np.expm1(theta) / (theta * np.exp(theta)), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.2, 4.0))
def test_distort_undistort_round_trip(theta, alpha):
    g = ExpRatio(theta)
    for base in (Exponential(alpha), ParetoII(alpha)):
        x = np.linspace(0, 50, 101)
        np.testing.assert_allclose(undistort(g, distort(g, base)).sf(x), base.sf(x), atol=1e-10)
        G = type(base)(alpha)
        rt = distort(g, undistort(g, G))
        np.testing.assert_allclose(rt.sf(x), G.sf(x), atol=1e-10)


def test_undistorted_wrapper_numerics():
    G = undistort(ExpRatio(0.5), Exponential(0.6))
    x = np.linspace(0.05, 10, 40)
    eps = 1e-6
    np.testing.assert_allclose(G.pdf(x), -(G.sf(x + eps) - G.sf(x - eps)) / (2 * eps), rtol=1e-6)
    np.testing.assert_allclose(G.dpdf(x), (G.pdf(x + eps) - G.pdf(x - eps)) / (2 * eps), rtol=1e-5, atol=1e-9)
    u = np.linspace(0.01, 0.99, 30)
    np.testing.assert_allclose(G.sf(G.isf(u)), u, atol=1e-12)


def test_pseudo_exponential_marginal():
    g = RecipExp(2.0)
    F = PseudoExponentialMarginal(g, 1.5)
    x = np.linspace(0, 3, 20)
    np.testing.assert_allclose(F.sf(x), g.h(np.exp(-1.5 * x)))


def test_registry_and_domains():
    assert make_marginal("pareto2", alpha=2) == ParetoII(2.0)
    with pytest.raises(DomainError):
        make_marginal("weibull", k=1)
    with pytest.raises(DomainError):
        Exponential(-1.0)
    with pytest.raises(DomainError):
        GompertzLogistic(0.0, 1.0)


def test_custom_survival_fallbacks():
    S = CustomSurvival(lambda x: 1.0 / (1.0 + np.asarray(x)) ** 2)
    x = np.linspace(0.1, 5, 20)
    np.testing.assert_allclose(S.pdf(x), 2 / (1 + x) ** 3, rtol=1e-6)
    u = np.linspace(0.05, 0.95, 10)
    np.testing.assert_allclose(S.isf(u), u**-0.5 - 1, rtol=1e-9)
    with pytest.raises(InvalidSurvivalError):
        CustomSurvival(lambda x: 0.5 * np.exp(-np.asarray(x)))
