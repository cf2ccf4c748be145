"""Centered ordinary least squares with geometric fit statistics.

All fitting happens on mean-centered data, where the model is a pure linear
combination of regressor vectors and every statistic has a norm
interpretation: the response vector splits orthogonally into a fitted part
and a residual part, the coefficient t ratios compare the length of a
regressor's orthogonalized contribution to the residual length, and the
degrees of freedom are ``n - p`` (the intercept never enters the centered
model; it is recovered afterwards from the means).

Conventional intercept-model statistics (df ``n - p - 1``, signed t) are
available through :func:`conventional_stats` for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _stats
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .data import CenteredData, center_column
from .exceptions import (
    CompleteMulticollinearityError,
    DegenerateRegressorError,
)
from .validation import as_float_matrix, as_float_vector, check_index

#: Relative singular-value cutoff below which the design counts as exactly
#: collinear rather than merely ill-conditioned.
RANK_TOL = 1e-10

#: A residual norm at or below this fraction of the response norm counts
#: as an exact fit: the significance statistics become infinite flags
#: instead of astronomically large float noise.
EXACT_FIT_RTOL = 1e-12


@dataclass(frozen=True)
class FitResult:
    """Everything one centered least-squares fit produces.

    Attributes
    ----------
    names : tuple of str
        Regressor names, fixing the coefficient order.
    slopes : ndarray, shape (p,)
        Estimated coefficients of the centered model.
    intercept : float
        ``mean(y) - slopes @ mean(X)``, the original-scale intercept.
    fitted, residuals : ndarray, shape (n,)
        Fitted values on the original scale and the residual vector.
    rss, ess : float
        Squared norms of the residual and fitted (centered) vectors.
    r_squared : float
        ``ess / (ess + rss)``; 0 for a constant response.
    sigma_sq : float
        ``rss / (n - p)``.
    t_values : ndarray, shape (p,)
        Unsigned geometric t ratios,
        ``sqrt(n - p) * |slope_j| * ortho_norm_j / resid_norm``.
    f_stat : float
        ``(ess / p) / (rss / (n - p))``.
    df : int
        ``n - p``.
    std_errors : ndarray, shape (p,)
        ``sqrt(sigma_sq) / ortho_norm_j``; zero for an exact fit.
    ortho_norms : ndarray, shape (p,)
        Norm of each regressor's component orthogonal to all the others;
        equals the regressor's own norm when p = 1 or the design is
        orthogonal.
    exact_fit : bool
        The residual norm is numerically zero relative to the response
        norm; t and F are infinite flags rather than numbers.
    """

    names: tuple[str, ...]
    slopes: np.ndarray
    intercept: float
    fitted: np.ndarray
    residuals: np.ndarray
    rss: float
    ess: float
    r_squared: float
    sigma_sq: float
    t_values: np.ndarray
    f_stat: float
    df: int
    n: int
    std_errors: np.ndarray
    ortho_norms: np.ndarray
    exact_fit: bool

    @property
    def p(self) -> int:
        return self.slopes.size

    @property
    def residual_norm(self) -> float:
        return float(np.sqrt(self.rss))

    @property
    def response_norm(self) -> float:
        return float(np.sqrt(self.ess + self.rss))


@dataclass(frozen=True)
class ConventionalStats:
    """Intercept-model statistics (df = n - p - 1) for comparison."""

    sigma_sq: float
    t_values: np.ndarray  # signed
    df: int


@dataclass(frozen=True)
class ConfidenceInterval:
    """Two-sided interval for one coefficient, plus its norm-ratio form.

    The additive form is always present. The multiplicative factorization
    ``estimate * (1 -+ norm_ratio)`` exists only when the estimate is
    nonzero; ``factorization_available`` says whether ``norm_ratio`` is
    meaningful.
    """

    low: float
    high: float
    estimate: float
    std_error: float
    t_critical: float
    alpha: float
    df: int
    norm_ratio: float | None
    factorization_available: bool


def _check_columns(xc: np.ndarray, names) -> np.ndarray:
    norms = np.linalg.norm(xc, axis=0)
    for j, nrm in enumerate(norms):
        if nrm == 0.0:
            raise DegenerateRegressorError(names[j])
    return norms


def _dependent_columns(vt: np.ndarray, s: np.ndarray, rank: int, names):
    # Columns loading on near-null right singular vectors form the
    # dependent set reported with the rank error.
    null_rows = vt[rank:]
    if null_rows.size == 0:
        return tuple(names)
    loading = np.max(np.abs(null_rows), axis=0)
    involved = loading > 1e-8 * loading.max()
    cols = tuple(n for n, inv in zip(names, involved) if inv)
    return cols or tuple(names)


def fit_ols(cd: CenteredData, rank_tol: float = RANK_TOL) -> FitResult:
    """Least-squares fit of the centered response on the centered regressors.

    Solved through the singular value decomposition of the centered design,
    which doubles as the rank check: a relative singular value at or below
    ``rank_tol`` raises :class:`CompleteMulticollinearityError` naming the
    dependent columns.
    """
    xc, yc = cd.x, cd.y
    n, p = xc.shape
    _check_columns(xc, cd.names)

    u, s, vt = np.linalg.svd(xc, full_matrices=False)
    if s[0] == 0.0 or s[-1] / s[0] <= rank_tol:
        rank = int(np.sum(s > rank_tol * s[0]))
        raise CompleteMulticollinearityError(
            _dependent_columns(vt, s, rank, cd.names), rank, p
        )

    slopes = vt.T @ ((u.T @ yc) / s)
    fitted_c = xc @ slopes
    residuals = yc - fitted_c
    rss = float(residuals @ residuals)
    ess = float(fitted_c @ fitted_c)
    tss = float(yc @ yc)
    r_squared = ess / tss if tss > 0.0 else 0.0

    # diag of (X'X)^-1 via the SVD; its reciprocal square root is the norm
    # of x_j orthogonalized against the other regressors.
    gram_inv_diag = np.einsum("kj,kj->j", vt, vt / (s * s)[:, None])
    ortho_norms = 1.0 / np.sqrt(gram_inv_diag)

    df = n - p
    sigma_sq = rss / df
    resid_norm = np.sqrt(rss)
    exact = resid_norm <= EXACT_FIT_RTOL * np.sqrt(tss)
    if not exact:
        t_values = np.sqrt(df) * np.abs(slopes) * ortho_norms / resid_norm
        std_errors = resid_norm / (np.sqrt(df) * ortho_norms)
        f_stat = (ess / p) / (rss / df)
    else:
        nonzero = np.abs(slopes) * ortho_norms > EXACT_FIT_RTOL * np.sqrt(tss)
        t_values = np.where(nonzero, np.inf, 0.0)
        std_errors = np.zeros(p)
        f_stat = np.inf if ess > 0.0 else 0.0

    intercept = cd.y_mean - float(slopes @ cd.x_means)
    fitted = fitted_c + cd.y_mean

    return FitResult(
        names=cd.names,
        slopes=slopes,
        intercept=intercept,
        fitted=fitted,
        residuals=residuals,
        rss=rss,
        ess=ess,
        r_squared=r_squared,
        sigma_sq=sigma_sq,
        t_values=t_values,
        f_stat=float(f_stat),
        df=df,
        n=n,
        std_errors=std_errors,
        ortho_norms=ortho_norms,
        exact_fit=bool(exact),
    )


def fit_univariate(x, y) -> float:
    """Slope of y on a single x: centered inner product over squared norm."""
    xc, _ = center_column(x)
    yc, _ = center_column(y)
    if xc.size != yc.size:
        raise ValueError(f"x has {xc.size} entries but y has {yc.size}")
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise DegenerateRegressorError("x")
    return float(xc @ yc) / sxx


def univariate_slopes(cd: CenteredData) -> np.ndarray:
    """Slope of the response on each regressor alone."""
    sxx = np.einsum("ij,ij->j", cd.x, cd.x)
    for j, v in enumerate(sxx):
        if v == 0.0:
            raise DegenerateRegressorError(cd.names[j])
    return (cd.x.T @ cd.y) / sxx


def conventional_stats(fit: FitResult) -> ConventionalStats | None:
    """Signed t values and variance under the intercept-model df, n - p - 1.

    Returns None when those degrees of freedom are exhausted.
    """
    df = fit.n - fit.p - 1
    if df < 1:
        return None
    sigma_sq = fit.rss / df
    if not fit.exact_fit:
        se = np.sqrt(sigma_sq) / fit.ortho_norms
        t_values = fit.slopes / se
    else:
        nonzero = fit.t_values == np.inf
        t_values = np.where(nonzero, np.sign(fit.slopes) * np.inf, 0.0)
    return ConventionalStats(sigma_sq=float(sigma_sq), t_values=t_values, df=df)


def t_critical(alpha: float, df: int) -> float:
    """Two-sided critical value of Student's t."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return float(_stats.t.ppf(1.0 - alpha / 2.0, df))


def confidence_interval(fit: FitResult, j: int, alpha: float = 0.05
                        ) -> ConfidenceInterval:
    """Two-sided interval for coefficient ``j`` at level ``alpha``.

    Besides the additive endpoints, the result carries the norm-ratio
    factor of the multiplicative rewrite
    ``estimate * (1 -+ ratio)``, which is undefined (and flagged
    unavailable) when the estimate is exactly zero.
    """
    j = check_index(j, fit.p)
    tcrit = t_critical(alpha, fit.df)
    estimate = float(fit.slopes[j])
    se = float(fit.std_errors[j])
    half = tcrit * se
    scaled_norm = abs(estimate) * float(fit.ortho_norms[j])
    if scaled_norm > EXACT_FIT_RTOL * fit.response_norm:
        ratio = tcrit * fit.residual_norm / (np.sqrt(fit.df) * scaled_norm)
        available = True
    else:
        ratio = None
        available = False
    return ConfidenceInterval(
        low=estimate - half,
        high=estimate + half,
        estimate=estimate,
        std_error=se,
        t_critical=tcrit,
        alpha=alpha,
        df=fit.df,
        norm_ratio=ratio,
        factorization_available=available,
    )


class CenteredOLS(RegressorMixin, BaseEstimator):
    """Least-squares regressor exposing the geometric fit statistics.

    Fits on mean-centered data and recovers the intercept from the means,
    so ``coef_`` and ``intercept_`` match a conventional intercept model
    while the attached statistics use the centered-model degrees of
    freedom ``n - p``.

    Parameters
    ----------
    rank_tol : float
        Relative singular-value cutoff for declaring the design exactly
        collinear.

    Attributes
    ----------
    coef_ : ndarray, shape (p,)
    intercept_ : float
    result_ : FitResult
        The full fit, including norms, t values and F.
    """

    def __init__(self, rank_tol: float = RANK_TOL):
        self.rank_tol = rank_tol

    def fit(self, X, y):
        names = [str(c) for c in X.columns] if hasattr(X, "columns") else None
        Xm = as_float_matrix(X)
        yv = as_float_vector(y, name="y")
        cd = CenteredData.from_arrays(Xm, yv, names=names)
        self.result_ = fit_ols(cd, rank_tol=self.rank_tol)
        self.coef_ = self.result_.slopes
        self.intercept_ = self.result_.intercept
        self.n_features_in_ = cd.p
        if hasattr(X, "columns"):
            self.feature_names_in_ = np.asarray(cd.names, dtype=object)
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        Xm = as_float_matrix(X)
        if Xm.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {Xm.shape[1]} features, expected {self.n_features_in_}"
            )
        return self.intercept_ + Xm @ self.coef_

    def confidence_interval(self, j: int, alpha: float = 0.05
                            ) -> ConfidenceInterval:
        check_is_fitted(self, "result_")
        return confidence_interval(self.result_, j, alpha)
