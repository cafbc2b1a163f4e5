#!/usr/bin/env python

"""
    Least squares with and without an intercept, coefficient correlations,
    joint confidence-ellipsoid tests and the F quantiles they need.
"""

from dataclasses import dataclass
import logging
from typing import Tuple

import numpy as np
from scipy import linalg, optimize, special

from .util import (
    DegenerateInputError,
    DimensionError,
    OutOfRangeError,
    RankDeficientError,
)

log = logging.getLogger(__name__)

# relative size below which a diagonal entry of R counts as zero
RANK_RTOL = 1e-10


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class OlsFit:
    coefficients: np.ndarray
    covariance: np.ndarray
    standard_errors: np.ndarray
    residual_variance: float
    df: int
    crossproduct: np.ndarray
    rss: float
    n: int
    names: Tuple[str, ...] = ()

    @property
    def p(self):
        return len(self.coefficients)

    def to_json(self):
        return {
            "names": list(self.names),
            "coefficients": self.coefficients.tolist(),
            "standard_errors": self.standard_errors.tolist(),
            "covariance": self.covariance.ravel().tolist(),
            "residual_variance": self.residual_variance,
            "df": self.df,
            "rss": self.rss,
        }


@dataclass(frozen=True)
class OriginFit:
    gamma0: float
    standard_error: float
    rss: float
    df: int
    n: int

    def predict(self, x):
        return self.gamma0 * np.asarray(x, dtype=float)

    def to_json(self):
        return {
            "gamma0": self.gamma0,
            "standard_error": self.standard_error,
            "rss": self.rss,
            "df": self.df,
        }


@dataclass(frozen=True)
class EllipsoidVerdict:
    statistic: float
    critical: float
    inside: bool
    level: float
    dfn: int
    dfd: int

    def to_json(self):
        return {
            "statistic": self.statistic,
            "critical": self.critical,
            "inside": self.inside,
            "level": self.level,
            "dfn": self.dfn,
            "dfd": self.dfd,
        }


def design_matrix(*columns, intercept=True):
    """Stacks regressor columns, with a leading column of ones if asked."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    if intercept:
        columns.insert(0, np.ones_like(columns[0]))
    return np.column_stack(columns)


def ols(design, response, names=()):
    """Least squares through a QR decomposition of the design.

    The covariance is s^2 (X'X)^-1 taken from R, and X'X itself is kept on
    the fit for ellipsoid tests."""
    X = np.asarray(design, dtype=float)
    if X.ndim == 1:
        X = X[:, np.newaxis]
    y = np.asarray(response, dtype=float)
    n, p = X.shape
    if y.shape != (n,):
        raise DimensionError(f"response has {y.size} values for {n} design rows")
    if n <= p:
        raise DegenerateInputError(f"{n} observations cannot fit {p} coefficients")

    Q, R = np.linalg.qr(X)
    diagonal = np.abs(np.diag(R))
    scale = np.linalg.norm(X, axis=0).max(initial=0.0)
    tolerance = RANK_RTOL * scale
    if scale == 0.0 or np.any(diagonal <= tolerance):
        raise RankDeficientError("design matrix does not have full column rank")

    beta = linalg.solve_triangular(R, Q.T @ y)
    residuals = y - X @ beta
    rss = float(residuals @ residuals)
    df = n - p
    s2 = rss / df
    r_inverse = linalg.solve_triangular(R, np.eye(p))
    covariance = s2 * (r_inverse @ r_inverse.T)
    covariance = (covariance + covariance.T) / 2
    fit = OlsFit(
        coefficients=_frozen(beta),
        covariance=_frozen(covariance),
        standard_errors=_frozen(np.sqrt(np.diag(covariance))),
        residual_variance=s2,
        df=df,
        crossproduct=_frozen(X.T @ X),
        rss=rss,
        n=n,
        names=tuple(names),
    )
    log.debug("OLS fit n=%d p=%d: %s", n, p, fit.coefficients)
    return fit


def log_regression(dbh, height, volume):
    """log V = beta0 + beta1 log d + beta2 log h, natural logs."""
    return loglog_fit(
        volume, np.log(dbh), np.log(height), names=("beta0", "beta1", "beta2")
    )


def loglog_fit(response, *log_columns, names=()):
    response = np.asarray(response, dtype=float)
    if np.any(response <= 0):
        raise DegenerateInputError("log regression needs positive responses")
    return ols(design_matrix(*log_columns), np.log(response), names=names)


def coeff_correlation(fit):
    se = fit.standard_errors
    if np.any(se == 0):
        raise DegenerateInputError("a coefficient has zero standard error")
    correlation = fit.covariance / np.outer(se, se)
    np.fill_diagonal(correlation, 1.0)
    return correlation


def fit_through_origin(x, y):
    """y = gamma0 x by least squares; df is n - 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"x has {x.size} values and y has {y.size}")
    if x.size < 2:
        raise DegenerateInputError("a through-origin fit needs at least two points")
    sxx = float(x @ x)
    if sxx == 0.0:
        raise DegenerateInputError("all x values are zero")
    gamma0 = float(x @ y) / sxx
    residuals = y - gamma0 * x
    rss = float(residuals @ residuals)
    df = x.size - 1
    fit = OriginFit(gamma0, float(np.sqrt(rss / df / sxx)), rss, df, x.size)
    log.debug("Through-origin fit gamma0=%r se=%r", fit.gamma0, fit.standard_error)
    return fit


def loglog_slope_check(x, y):
    """log y = gamma0* + gamma1 log x; a monomial y = g x^gamma1 shows up as
    a straight line here."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DegenerateInputError("log-log fit needs positive x")
    return loglog_fit(y, np.log(x), names=("gamma0*", "gamma1"))


def rounds_to(value, target, digits=2):
    """True if value equals target once rounded to `digits` significant figures."""
    return float(f"{value:.{digits}g}") == float(f"{target:.{digits}g}")


def f_cdf(x, d1, d2):
    if x <= 0:
        return 0.0
    return float(special.betainc(d1 / 2, d2 / 2, d1 * x / (d1 * x + d2)))


def f_quantile(p, d1, d2):
    """Inverse F CDF by bisection on a bracket doubled until it holds p."""
    if not 0 < p < 1:
        raise OutOfRangeError(f"probability must lie in (0, 1), got {p!r}")
    if d1 < 1 or d2 < 1:
        raise OutOfRangeError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    high = 1.0
    while f_cdf(high, d1, d2) < p:
        high *= 2
    return float(
        optimize.bisect(
            lambda x: f_cdf(x, d1, d2) - p,
            0.0,
            high,
            xtol=1e-14,
            rtol=4 * np.finfo(float).eps,
            maxiter=500,
        )
    )


def ellipsoid_test(fit, hypothesis, level, indices=None):
    """Is `hypothesis` inside the joint confidence region of the fit?

    With `indices`, only those coefficients are tested jointly, using the
    matching block of the covariance."""
    b = np.asarray(hypothesis, dtype=float)
    if b.shape != (fit.p,):
        raise DimensionError(f"hypothesis has {b.size} values for {fit.p} coefficients")
    if not 0 < level < 1:
        raise OutOfRangeError(f"confidence level must lie in (0, 1), got {level!r}")

    delta = b - fit.coefficients
    if indices is None:
        q = fit.p
        quadratic = float(delta @ fit.crossproduct @ delta)
        scale = q * fit.residual_variance
    else:
        indices = list(indices)
        q = len(indices)
        block = fit.covariance[np.ix_(indices, indices)]
        delta = delta[indices]
        quadratic = float(delta @ np.linalg.solve(block, delta)) if delta.any() else 0.0
        scale = q

    if scale == 0:
        statistic = 0.0 if not delta.any() else float("inf")
    else:
        statistic = quadratic / scale
    critical = f_quantile(level, q, fit.df)
    verdict = EllipsoidVerdict(
        statistic, critical, statistic <= critical, level, q, fit.df
    )
    log.debug("Ellipsoid test at %s: %s", b, verdict)
    return verdict


def ellipse_boundary(fit, indices=(0, 2), level=0.999, points=181):
    """Boundary of the slice through the joint region along two coefficients,
    the others held at their estimates. Every point has statistic == critical."""
    i, j = indices
    critical = f_quantile(level, fit.p, fit.df)
    radius = np.sqrt(fit.p * fit.residual_variance * critical)
    block = fit.crossproduct[np.ix_([i, j], [i, j])]
    lower = np.linalg.cholesky(block)
    angles = np.linspace(0.0, 2 * np.pi, points)
    unit_circle = np.vstack([np.cos(angles), np.sin(angles)])
    offsets = radius * linalg.solve_triangular(lower.T, unit_circle, lower=False)
    centre = fit.coefficients[[i, j]]
    return (centre[:, np.newaxis] + offsets).T


def pearson(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"x has {x.size} values and y has {y.size}")
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateInputError("correlation needs two or more varying values")
    return float(np.corrcoef(x, y)[0, 1])


def prediction_rss(predict, dataset):
    """Sum of (V - predict(d, h))^2 over the records, d and h in feet."""
    return float(
        sum(
            (record.volume_ft3 - predict(record.dbh_ft, record.height_ft)) ** 2
            for record in dataset
        )
    )
