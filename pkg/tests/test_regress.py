import math

import numpy as np
import pytest
from scipy import stats

from mensura import pi, regress
from mensura.data import cherry_dataset
from mensura.util import (
    DegenerateInputError,
    DimensionError,
    OutOfRangeError,
    RankDeficientError,
)


@pytest.fixture(scope="module")
def cherry():
    return cherry_dataset()


@pytest.fixture(scope="module")
def fit(cherry):
    return regress.log_regression(cherry.dbh_ft, cherry.height_ft, cherry.volume_ft3)


def _formulation(cherry, label):
    basis = pi.groups_for_trees()[label]
    x = np.array([pi.evaluate_group(basis["pi1"], r.quantities()) for r in cherry])
    y = np.array([pi.evaluate_group(basis["pi0"], r.quantities()) for r in cherry])
    return x, y


def test_log_regression_coefficients(fit):
    assert fit.coefficients == pytest.approx([-1.705, 1.98, 1.117], abs=0.005)
    assert fit.standard_errors == pytest.approx([0.8819, 0.0750, 0.2044], abs=0.002)
    assert fit.df == 28
    assert fit.n == 31
    assert fit.names == ("beta0", "beta1", "beta2")


def test_log_regression_matches_numpy_lstsq(cherry, fit):
    X = regress.design_matrix(np.log(cherry.dbh_ft), np.log(cherry.height_ft))
    expected, *_ = np.linalg.lstsq(X, np.log(cherry.volume_ft3), rcond=None)
    assert fit.coefficients == pytest.approx(expected, rel=1e-10)


def test_covariance_is_symmetric_and_read_only(fit):
    assert np.array_equal(fit.covariance, fit.covariance.T)
    with pytest.raises(ValueError):
        fit.coefficients[0] = 0.0


def test_coefficient_correlations(fit):
    corr = regress.coeff_correlation(fit)
    assert corr[0, 2] == pytest.approx(-0.9998, abs=0.0005)
    assert 0.35 <= abs(corr[0, 1]) <= 0.65
    assert 0.35 <= abs(corr[1, 2]) <= 0.65
    assert np.allclose(np.diag(corr), 1.0)


def test_ols_errors():
    with pytest.raises(DegenerateInputError):
        regress.ols(np.ones((2, 2)), np.ones(2))
    with pytest.raises(DimensionError):
        regress.ols(np.ones((4, 2)), np.ones(3))
    x = np.arange(1.0, 6.0)
    with pytest.raises(RankDeficientError):
        regress.ols(regress.design_matrix(x, 2 * x), np.arange(5.0))
    with pytest.raises(RankDeficientError):
        regress.ols(regress.design_matrix(np.full(5, 3.0)), np.arange(5.0))


def test_exact_fit_has_zero_residual_variance():
    x = np.arange(1.0, 6.0)
    fit = regress.ols(regress.design_matrix(x), 2 + 3 * x)
    assert fit.coefficients == pytest.approx([2.0, 3.0])
    assert fit.rss == pytest.approx(0.0, abs=1e-20)


@pytest.mark.parametrize(
    "label, gamma0, se",
    [("a", (0.302355, 0.0005), (0.003893, 0.0002)), ("c", (0.30270, 0.0005), (0.00423, 0.0003))],
)
def test_through_origin_fits(cherry, label, gamma0, se):
    fit = regress.fit_through_origin(*_formulation(cherry, label))
    assert fit.gamma0 == pytest.approx(gamma0[0], abs=gamma0[1])
    assert fit.standard_error == pytest.approx(se[0], abs=se[1])
    assert fit.df == 30


def test_through_origin_closed_form():
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([2.0, 4.5, 5.5])
    fit = regress.fit_through_origin(x, y)
    assert fit.gamma0 == pytest.approx((x @ y) / (x @ x))
    assert fit.predict([2.0]) == pytest.approx([2 * fit.gamma0])


def test_through_origin_errors():
    with pytest.raises(DegenerateInputError):
        regress.fit_through_origin([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(DegenerateInputError):
        regress.fit_through_origin([1.0], [1.0])
    with pytest.raises(DimensionError):
        regress.fit_through_origin([1.0, 2.0], [1.0])


@pytest.mark.parametrize("label, monomial", [("a", True), ("b", False), ("c", True), ("d", False)])
def test_monomial_screening(cherry, label, monomial):
    slope = regress.loglog_slope_check(*_formulation(cherry, label)).coefficients[1]
    assert regress.rounds_to(slope, 1.0, 2) is monomial


def test_rounds_to():
    assert regress.rounds_to(0.996, 1.0)
    assert regress.rounds_to(1.04, 1.0)
    assert not regress.rounds_to(1.06, 1.0)
    assert not regress.rounds_to(1.96, 1.0)


@pytest.mark.parametrize("p", [0.5, 0.9, 0.95, 0.99, 0.999])
@pytest.mark.parametrize("d1, d2", [(1, 1), (2, 28), (3, 28), (5, 10), (10, 100)])
def test_f_quantile_matches_scipy(p, d1, d2):
    q = regress.f_quantile(p, d1, d2)
    assert q == pytest.approx(stats.f.ppf(p, d1, d2), rel=1e-8)
    assert regress.f_cdf(q, d1, d2) == pytest.approx(p, abs=1e-8)


def test_f_cdf_matches_scipy():
    for x in (0.1, 1.0, 3.5, 20.0):
        assert regress.f_cdf(x, 3, 28) == pytest.approx(stats.f.cdf(x, 3, 28), rel=1e-10)
    assert regress.f_cdf(0.0, 3, 28) == 0.0


@pytest.mark.parametrize("p, d1, d2", [(0.0, 3, 28), (1.0, 3, 28), (0.5, 0, 28), (0.5, 3, 0)])
def test_f_quantile_rejects_bad_input(p, d1, d2):
    with pytest.raises(OutOfRangeError):
        regress.f_quantile(p, d1, d2)


def test_ellipsoid_verdicts(cherry, fit):
    gamma0 = regress.fit_through_origin(*_formulation(cherry, "a")).gamma0
    cylinder = regress.ellipsoid_test(fit, (math.log(math.pi / 4), 2, 1), 0.999)
    cone = regress.ellipsoid_test(fit, (math.log(math.pi / 12), 2, 1), 0.999)
    da = regress.ellipsoid_test(fit, (math.log(gamma0), 2, 1), 0.999)
    assert not cylinder.inside
    assert not cone.inside
    assert da.inside
    assert da.critical == pytest.approx(stats.f.ppf(0.999, 3, 28), rel=1e-8)
    assert (da.dfn, da.dfd) == (3, 28)


def test_estimate_is_always_inside(fit):
    verdict = regress.ellipsoid_test(fit, fit.coefficients, 0.5)
    assert verdict.statistic == pytest.approx(0.0, abs=1e-20)
    assert verdict.inside


def test_ellipsoid_statistic_matches_covariance_form(fit):
    b = np.array([-1.0, 2.0, 1.0])
    delta = b - fit.coefficients
    expected = delta @ np.linalg.solve(fit.covariance, delta) / 3
    assert regress.ellipsoid_test(fit, b, 0.99).statistic == pytest.approx(expected, rel=1e-8)


def test_marginal_test_uses_the_covariance_block(fit):
    b = np.array([-1.0, 1.9, 1.0])
    verdict = regress.ellipsoid_test(fit, b, 0.999, indices=(0, 2))
    delta = (b - fit.coefficients)[[0, 2]]
    block = fit.covariance[np.ix_([0, 2], [0, 2])]
    assert verdict.statistic == pytest.approx(delta @ np.linalg.solve(block, delta) / 2)
    assert verdict.dfn == 2


def test_ellipsoid_errors(fit):
    with pytest.raises(DimensionError):
        regress.ellipsoid_test(fit, (0.0, 1.0), 0.9)
    with pytest.raises(OutOfRangeError):
        regress.ellipsoid_test(fit, (0.0, 1.0, 1.0), 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_ellipsoid_statistic_is_invariant_under_reparameterisation(cherry, seed):
    rng = np.random.default_rng(seed)
    X = regress.design_matrix(np.log(cherry.dbh_ft), np.log(cherry.height_ft))
    y = np.log(cherry.volume_ft3)
    A = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    b = np.array([-1.5, 2.0, 1.0])

    original = regress.ellipsoid_test(regress.ols(X, y), b, 0.999)
    transformed = regress.ellipsoid_test(
        regress.ols(X @ A, y), np.linalg.solve(A, b), 0.999
    )
    assert transformed.statistic == pytest.approx(original.statistic, rel=1e-8)
    assert transformed.inside == original.inside


def test_ellipse_boundary_points_sit_on_the_critical_value(fit):
    level = 0.999
    boundary = regress.ellipse_boundary(fit, (0, 2), level, points=37)
    assert boundary.shape == (37, 2)
    for b0, b2 in boundary:
        b = np.array([b0, fit.coefficients[1], b2])
        verdict = regress.ellipsoid_test(fit, b, level)
        assert verdict.statistic == pytest.approx(verdict.critical, rel=1e-6)


def test_pearson():
    assert regress.pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    with pytest.raises(DegenerateInputError):
        regress.pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateInputError):
        regress.pearson([1], [1])


def test_prediction_rss_of_the_rounded_model(cherry):
    rss = regress.prediction_rss(lambda d, h: 0.302 * h * d * d, cherry)
    assert rss == pytest.approx(181.4, abs=0.3)


def _designs(cherry):
    d, h, v = cherry.dbh_ft, cherry.height_ft, cherry.volume_ft3
    rng = np.random.default_rng(7)
    x = rng.normal(size=(40, 3))
    noisy = x @ [1.0, -2.0, 0.5] + rng.normal(size=40)
    return {
        "log_regression": (regress.design_matrix(np.log(d), np.log(h)), np.log(v)),
        "dbh_cubic": (regress.design_matrix(d, d ** 2, d ** 3), v),
        "random": (regress.design_matrix(*x.T), noisy),
    }


@pytest.mark.parametrize("name", ["log_regression", "dbh_cubic", "random"])
def test_residuals_are_orthogonal_to_the_design(cherry, name):
    X, y = _designs(cherry)[name]
    fit = regress.ols(X, y)
    residuals = y - X @ fit.coefficients
    assert np.max(np.abs(X.T @ residuals)) <= 1e-8 * np.linalg.norm(y)


@pytest.mark.parametrize("shift", [-3.0, 0.5, 100.0])
@pytest.mark.parametrize("name", ["log_regression", "random"])
def test_shifting_the_response_moves_only_the_intercept(cherry, name, shift):
    X, y = _designs(cherry)[name]
    fit = regress.ols(X, y)
    shifted = regress.ols(X, y + shift)
    assert shifted.coefficients[0] == pytest.approx(fit.coefficients[0] + shift)
    assert shifted.coefficients[1:] == pytest.approx(fit.coefficients[1:], abs=1e-9)
    assert shifted.rss == pytest.approx(fit.rss)


def test_collinear_points_fit_exactly():
    fit = regress.ols(regress.design_matrix([0.0, 1.0, 2.0]), [1.0, 2.0, 3.0])
    assert fit.coefficients == pytest.approx([1.0, 1.0])
    assert fit.rss == pytest.approx(0.0, abs=1e-20)
    assert fit.df == 1


def test_orthogonal_design_has_uncorrelated_coefficients():
    x1 = [-1.0, 1.0, -1.0, 1.0]
    x2 = [-1.0, -1.0, 1.0, 1.0]
    fit = regress.ols(regress.design_matrix(x1, x2), [1.0, 3.0, 2.0, 5.0])
    correlation = regress.coeff_correlation(fit)
    assert correlation == pytest.approx(np.eye(3), abs=1e-12)


def test_loglog_slope_of_an_exact_power_law():
    x = np.arange(1.0, 11.0)
    fit = regress.loglog_slope_check(x, x ** 3)
    assert fit.coefficients == pytest.approx([0.0, 3.0], abs=1e-12)
    assert fit.rss == pytest.approx(0.0, abs=1e-20)


def test_f_quantile_with_one_numerator_df_is_a_squared_t_quantile():
    t = stats.t.ppf(0.975, 10)
    assert regress.f_quantile(0.95, 1, 10) == pytest.approx(t * t, rel=1e-8)
    assert regress.f_quantile(0.95, 1, 10) == pytest.approx(4.9646, abs=1e-4)


def test_through_origin_intervals_cover_the_true_coefficient():
    rng = np.random.default_rng(20240131)
    gamma, trials, n = 0.3, 1000, 100
    covered = 0
    for _ in range(trials):
        x = rng.uniform(1.0, 10.0, n)
        y = gamma * x + rng.normal(0.0, 0.5, n)
        fit = regress.fit_through_origin(x, y)
        covered += abs(fit.gamma0 - gamma) <= 3 * fit.standard_error
    assert covered >= 0.99 * trials
