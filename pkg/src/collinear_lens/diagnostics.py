"""Multicollinearity detection and cause classification.

The detector looks for two sample phenomena: a variable whose univariate
slope and full-model partial slope disagree in sign (the sign-expectation
deviation), and a jointly significant model whose individual coefficients
are not. The classifier turns those observations, optionally together
with a difference-model comparison, into an advisory hint about whether
the deviation stems from the joint structure of the variables or from the
sample itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .data import CenteredData, Dataset, center
from .exceptions import DegenerateRegressorError
from .regression import (
    RANK_TOL,
    conventional_stats,
    fit_ols,
    t_critical,
    univariate_slopes,
)
from .decomposition import t_star as _t_star
from .validation import as_float_matrix, as_float_vector

#: Relative threshold under which a slope counts as zero-signed.
ZERO_SIGN_TOL = 1e-12

#: VIF ceiling: an auxiliary R-squared within 1e-12 of one flags infinity.
VIF_R2_CEILING = 1.0 - 1e-12


class CauseHint(enum.Enum):
    """Advisory classification of an observed collinearity symptom."""

    NONE = "none"
    SAMPLE_SELECTION_SUSPECTED = "sample_selection_suspected"
    STRUCTURE_SUSPECTED = "structure_suspected"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class VariableDiagnostics:
    """Per-regressor diagnostic row."""

    name: str
    univariate_slope: float
    partial_slope: float
    sign_deviation: bool
    t_paper: float
    t_conventional: float | None
    t_star: float
    vif: float
    univariate_t: float


@dataclass(frozen=True)
class GeometricNorms:
    """The norm bookkeeping of one fit.

    ``scaled_regressor_norms`` holds each coefficient's full projection
    length; ``net_effect_norms`` the length after orthogonalizing against
    the other regressors, which is what the t ratio compares with
    ``residual_norm``.
    """

    y_norm: float
    fitted_norm: float
    residual_norm: float
    scaled_regressor_norms: np.ndarray
    net_effect_norms: np.ndarray
    pythagorean_gap: float


@dataclass(frozen=True)
class DiagnosticsReport:
    """Everything the ``diagnose`` surface emits for one dataset."""

    names: tuple[str, ...]
    per_variable: tuple[VariableDiagnostics, ...]
    correlation_matrix: np.ndarray
    geometric: GeometricNorms
    f_stat: float
    r_squared: float
    intercept: float
    df: int
    sigma_sq: float
    df_conventional: int | None
    sigma_sq_conventional: float | None
    alpha: float
    classification_hint: CauseHint
    infinite_significance: bool


def slope_sign(value: float, scale: float) -> int:
    """Sign of a slope with a scale-aware zero band."""
    if abs(value) <= ZERO_SIGN_TOL * scale:
        return 0
    return 1 if value > 0 else -1


def _slope_scales(cd: CenteredData) -> np.ndarray:
    # natural magnitude of a slope of y on x_j, used to size the zero band
    y_norm = float(np.linalg.norm(cd.y))
    x_norms = np.linalg.norm(cd.x, axis=0)
    safe = np.where(x_norms > 0.0, x_norms, 1.0)
    return np.where(x_norms > 0.0, y_norm / safe, 1.0)


def _deviation_flags(uni: np.ndarray, partial: np.ndarray,
                     scales: np.ndarray) -> np.ndarray:
    flags = np.zeros(uni.size, dtype=bool)
    for j in range(uni.size):
        su = slope_sign(float(uni[j]), float(scales[j]))
        sp = slope_sign(float(partial[j]), float(scales[j]))
        flags[j] = su * sp < 0
    return flags


def sign_expectation_deviation(data: Dataset) -> dict[str, bool]:
    """Flag each regressor whose univariate and partial slopes disagree in sign.

    Zero slopes (within a scale-aware band) carry sign zero and are never
    flagged.
    """
    cd = center(data)
    fit = fit_ols(cd)
    uni = univariate_slopes(cd)
    flags = _deviation_flags(uni, fit.slopes, _slope_scales(cd))
    return dict(zip(cd.names, (bool(f) for f in flags)))


def vif(cd: CenteredData) -> np.ndarray:
    """Variance inflation factors, 1 / (1 - R2_j).

    R2_j comes from regressing regressor j on all the others; a lone
    regressor has nothing to regress on and gets VIF exactly 1. Auxiliary
    fits that are essentially perfect produce ``inf`` rather than an
    error.
    """
    x = cd.x
    n, p = x.shape
    norms_sq = np.einsum("ij,ij->j", x, x)
    for j, v in enumerate(norms_sq):
        if v == 0.0:
            raise DegenerateRegressorError(cd.names[j])
    if p == 1:
        return np.ones(1)
    out = np.empty(p)
    for j in range(p):
        others = np.delete(x, j, axis=1)
        coef, _, _, _ = np.linalg.lstsq(others, x[:, j], rcond=None)
        resid = x[:, j] - others @ coef
        r2 = 1.0 - float(resid @ resid) / norms_sq[j]
        out[j] = np.inf if r2 >= VIF_R2_CEILING else 1.0 / (1.0 - r2)
    return out


def _univariate_t(cd: CenteredData, uni: np.ndarray) -> np.ndarray:
    """Geometric t of each single-regressor fit, df = n - 1."""
    n = cd.n
    out = np.empty(cd.p)
    y_sq = float(cd.y @ cd.y)
    for j in range(cd.p):
        xj = cd.x[:, j]
        fitted_sq = uni[j] ** 2 * float(xj @ xj)
        rss = max(y_sq - fitted_sq, 0.0)
        if rss > 0.0:
            out[j] = np.sqrt(n - 1) * np.sqrt(fitted_sq) / np.sqrt(rss)
        else:
            out[j] = np.inf if fitted_sq > 0.0 else 0.0
    return out


def classify_cause(data: Dataset, diff_comparison=None,
                   alpha: float = 0.05) -> CauseHint:
    """Advisory hint about the source of an observed collinearity symptom.

    With no sign deviation, a significant univariate slope paired with an
    insignificant partial slope points at the sample being too small. A
    sign deviation that persists in the difference-model structure points
    at the joint distribution of the variables; one that vanishes there
    points back at sampling noise; without difference evidence it stays
    indeterminate. The hint is advisory, never a verdict.

    ``diff_comparison`` is the structure comparison produced by
    ``remedies.structure_compare``; passing it asserts the observation
    order was meaningful to difference over.
    """
    cd = center(data)
    fit = fit_ols(cd)
    uni = univariate_slopes(cd)
    flags = _deviation_flags(uni, fit.slopes, _slope_scales(cd))

    uni_t = _univariate_t(cd, uni)
    crit_uni = t_critical(alpha, cd.n - 1)
    crit_partial = t_critical(alpha, fit.df)
    sig_uni = uni_t > crit_uni
    sig_partial = fit.t_values > crit_partial

    if not flags.any():
        if bool(np.any(sig_uni & ~sig_partial)):
            return CauseHint.SAMPLE_SELECTION_SUSPECTED
        return CauseHint.NONE

    if diff_comparison is None:
        return CauseHint.INDETERMINATE

    agreement = np.asarray(diff_comparison.sign_agreement, dtype=bool)
    if agreement.size != flags.size:
        raise ValueError("difference comparison covers a different variable set")
    # a deviation whose partial slope keeps its sign after differencing is
    # evidence the deviation sits in the variables' joint structure
    if bool(np.any(flags & agreement)):
        return CauseHint.STRUCTURE_SUSPECTED
    return CauseHint.SAMPLE_SELECTION_SUSPECTED


def geometric_report(data: Dataset, alpha: float = 0.05,
                     diff_comparison=None,
                     rank_tol: float = RANK_TOL) -> DiagnosticsReport:
    """Full diagnostics: slopes, norms, t, t*, VIF, flags and the cause hint."""
    cd = center(data)
    fit = fit_ols(cd, rank_tol=rank_tol)
    uni = univariate_slopes(cd)
    flags = _deviation_flags(uni, fit.slopes, _slope_scales(cd))
    vifs = vif(cd)
    uni_t = _univariate_t(cd, uni)
    conv = conventional_stats(fit)

    per_variable = tuple(
        VariableDiagnostics(
            name=cd.names[j],
            univariate_slope=float(uni[j]),
            partial_slope=float(fit.slopes[j]),
            sign_deviation=bool(flags[j]),
            t_paper=float(fit.t_values[j]),
            t_conventional=(None if conv is None
                            else float(np.abs(conv.t_values[j]))),
            t_star=_t_star(fit, cd, j),
            vif=float(vifs[j]),
            univariate_t=float(uni_t[j]),
        )
        for j in range(cd.p)
    )

    corr = np.corrcoef(cd.x, rowvar=False)
    corr = np.atleast_2d(corr)

    y_sq = float(cd.y @ cd.y)
    geometric = GeometricNorms(
        y_norm=float(np.sqrt(y_sq)),
        fitted_norm=float(np.sqrt(fit.ess)),
        residual_norm=fit.residual_norm,
        scaled_regressor_norms=np.abs(fit.slopes) * np.linalg.norm(cd.x, axis=0),
        net_effect_norms=np.abs(fit.slopes) * fit.ortho_norms,
        pythagorean_gap=abs(y_sq - fit.ess - fit.rss) / max(y_sq, 1e-300),
    )

    hint = classify_cause(data, diff_comparison=diff_comparison, alpha=alpha)

    return DiagnosticsReport(
        names=cd.names,
        per_variable=per_variable,
        correlation_matrix=corr,
        geometric=geometric,
        f_stat=fit.f_stat,
        r_squared=fit.r_squared,
        intercept=fit.intercept,
        df=fit.df,
        sigma_sq=fit.sigma_sq,
        df_conventional=None if conv is None else conv.df,
        sigma_sq_conventional=None if conv is None else conv.sigma_sq,
        alpha=alpha,
        classification_hint=hint,
        infinite_significance=fit.exact_fit,
    )


class CollinearityDiagnostics(BaseEstimator):
    """Estimator wrapper around :func:`geometric_report`.

    Parameters
    ----------
    alpha : float
        Two-sided significance level used for the t thresholds behind the
        cause classification.
    rank_tol : float
        Relative singular-value cutoff of the underlying fit.
    """

    def __init__(self, alpha: float = 0.05, rank_tol: float = RANK_TOL):
        self.alpha = alpha
        self.rank_tol = rank_tol

    def fit(self, X, y):
        names = [str(c) for c in X.columns] if hasattr(X, "columns") else None
        Xm = as_float_matrix(X)
        yv = as_float_vector(y, name="y")
        data = Dataset.from_arrays(Xm, yv, names=names)
        self.report_ = geometric_report(data, alpha=self.alpha,
                                        rank_tol=self.rank_tol)
        self.vif_ = np.array([v.vif for v in self.report_.per_variable])
        self.sign_deviation_ = np.array(
            [v.sign_deviation for v in self.report_.per_variable], dtype=bool
        )
        self.t_values_ = np.array([v.t_paper for v in self.report_.per_variable])
        self.t_star_ = np.array([v.t_star for v in self.report_.per_variable])
        self.classification_hint_ = self.report_.classification_hint
        self.n_features_in_ = len(self.report_.names)
        return self
