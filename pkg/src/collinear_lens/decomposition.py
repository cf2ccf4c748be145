"""Slope decomposition machinery.

Three related ways of looking at a regression coefficient live here:

* the cumulative-weight form: a univariate slope equals the inner product
  of a prefix-sum weight vector built from x with the successive
  differences of y, under any shared observation ordering;
* the pairwise-slope matrix, which maps the vector of full-model (partial)
  slopes onto the vector of univariate slopes, and back;
* Frisch-Waugh-Lovell residualization, which isolates one coefficient by
  regressing residual on residual and reproduces the full model's slope,
  residuals and t ratio.

The t* statistic, the gross-projection counterpart of t, is also here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .data import CenteredData, center_column
from .exceptions import (
    CompleteMulticollinearityError,
    DegenerateRegressorError,
    OrderingMismatchError,
    StructuralCollinearityError,
)
from .regression import (
    EXACT_FIT_RTOL,
    RANK_TOL,
    FitResult,
    fit_ols,
    univariate_slopes,
)
from .validation import as_float_matrix, as_float_vector, check_index

#: Condition-number ceiling beyond which the pairwise-slope matrix is
#: treated as structurally collinear instead of being inverted.
MAX_CONDITION = 1e12


def _resolve_order(order, n: int) -> np.ndarray:
    if order is None:
        return np.arange(n)
    idx = np.asarray(order, dtype=np.intp)
    if idx.shape != (n,) or not np.array_equal(np.sort(idx), np.arange(n)):
        raise ValueError("order must be a permutation of range(n)")
    return idx


@dataclass(frozen=True)
class CumulativeWeights:
    """Prefix-sum weights of a regressor under one observation ordering.

    ``increments[i]`` is ``(mean(x) - x_i) / sum((x - mean(x))**2)`` and
    ``weights`` holds their first n-1 partial sums; the full sum telescopes
    to zero, so the final partial sum is dropped.
    """

    increments: np.ndarray
    weights: np.ndarray
    ordering: np.ndarray

    @property
    def n(self) -> int:
        return self.increments.size


@dataclass(frozen=True)
class Differences:
    """Successive differences of a vector under one observation ordering."""

    values: np.ndarray
    ordering: np.ndarray


def cumulative_weights(x, order=None) -> CumulativeWeights:
    """Build the prefix-sum weight vector of x.

    The scaling uses the n-divisor variance, so the inner product of the
    weights with any difference vector reproduces the covariance-over-
    variance slope exactly.
    """
    xv = as_float_vector(x, name="x")
    if xv.size < 2:
        raise ValueError(f"need at least 2 observations, got {xv.size}")
    idx = _resolve_order(order, xv.size)
    xo = xv[idx]
    centered, _ = center_column(xo)
    ssd = float(centered @ centered)  # n * variance with divisor n
    if ssd == 0.0:
        raise DegenerateRegressorError("x")
    increments = -centered / ssd
    weights = np.cumsum(increments)[:-1]
    return CumulativeWeights(increments=increments, weights=weights,
                             ordering=idx)


def successive_differences(values, order=None) -> Differences:
    """Difference vector v[i+1] - v[i] under an optional ordering."""
    vv = as_float_vector(values, name="values")
    if vv.size < 2:
        raise ValueError(f"need at least 2 observations, got {vv.size}")
    idx = _resolve_order(order, vv.size)
    return Differences(values=np.diff(vv[idx]), ordering=idx)


def inner_product_slope(weights: CumulativeWeights, dy: Differences) -> float:
    """Inner product of cumulative weights with a difference vector.

    Equals the univariate least-squares slope of the differenced variable
    on the weight-defining variable, provided both were built under the
    same observation ordering.
    """
    if weights.weights.size != dy.values.size:
        raise OrderingMismatchError(
            f"weight vector has {weights.weights.size} entries but the "
            f"difference vector has {dy.values.size}"
        )
    if not np.array_equal(weights.ordering, dy.ordering):
        raise OrderingMismatchError(
            "cumulative weights and differences were built under different "
            "observation orderings"
        )
    return float(weights.weights @ dy.values)


@dataclass(frozen=True)
class PairwiseSlopes:
    """Matrix of univariate slopes between regressors.

    ``matrix[i, j]`` is the slope of x_j regressed on x_i, so the diagonal
    is exactly one and ``matrix @ partial_slopes`` gives the univariate
    slopes of the response on each regressor.
    """

    matrix: np.ndarray
    names: tuple[str, ...]

    @property
    def p(self) -> int:
        return self.matrix.shape[0]

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))


def pairwise_slopes(cd: CenteredData) -> PairwiseSlopes:
    """All pairwise univariate regression slopes among the regressors."""
    gram = cd.x.T @ cd.x
    diag = np.diag(gram).copy()
    for j, v in enumerate(diag):
        if v == 0.0:
            raise DegenerateRegressorError(cd.names[j])
    matrix = gram / diag[:, None]
    return PairwiseSlopes(matrix=matrix, names=cd.names)


def decompose(pairwise: PairwiseSlopes, partial_slopes) -> np.ndarray:
    """Map partial slopes to univariate slopes through the pairwise matrix."""
    vec = as_float_vector(partial_slopes, name="partial_slopes")
    if vec.size != pairwise.p:
        raise ValueError(
            f"expected {pairwise.p} partial slopes, got {vec.size}"
        )
    return pairwise.matrix @ vec


def recover_partials(pairwise: PairwiseSlopes, univariate,
                     max_condition: float = MAX_CONDITION) -> np.ndarray:
    """Invert the pairwise-slope map: univariate slopes back to partials."""
    vec = as_float_vector(univariate, name="univariate")
    if vec.size != pairwise.p:
        raise ValueError(
            f"expected {pairwise.p} univariate slopes, got {vec.size}"
        )
    cond = pairwise.condition_number
    if not np.isfinite(cond) or cond >= max_condition:
        raise StructuralCollinearityError(cond)
    return np.linalg.solve(pairwise.matrix, vec)


@dataclass(frozen=True)
class FWLResult:
    """One coefficient isolated by residual-on-residual regression.

    ``y_resid`` is the response residualized on the other regressors,
    ``x_resid`` the target regressor residualized the same way, ``slope``
    their univariate regression slope (equal to the full-model partial
    slope) and ``t_value`` the geometric t ratio, which matches the full
    model's.
    """

    name: str
    y_resid: np.ndarray
    x_resid: np.ndarray
    slope: float
    t_value: float
    df: int

    @property
    def explained(self) -> np.ndarray:
        """The net-effect vector: slope times the residualized regressor."""
        return self.slope * self.x_resid

    @property
    def residual(self) -> np.ndarray:
        """Residual of the residual regression; equals the full model's."""
        return self.y_resid - self.slope * self.x_resid


def _sub_centered(cd: CenteredData, keep: list[int]) -> CenteredData:
    return CenteredData(
        y=cd.y,
        x=cd.x[:, keep],
        y_mean=0.0,
        x_means=np.zeros(len(keep)),
        names=tuple(cd.names[i] for i in keep),
        response=cd.response,
    )


def fwl_residualize(cd: CenteredData, j: int,
                    rank_tol: float = RANK_TOL) -> FWLResult:
    """Residualize the response and regressor ``j`` on all other regressors.

    Needs p >= 2; a single-regressor model has nothing to residualize
    against and should use the univariate slope directly.
    """
    if cd.p < 2:
        raise ValueError("residualization needs at least two regressors; "
                         "use the univariate slope for p = 1")
    j = check_index(j, cd.p)
    others = [k for k in range(cd.p) if k != j]

    rest = _sub_centered(cd, others)
    y_resid = fit_ols(rest, rank_tol=rank_tol).residuals

    rest_x = CenteredData(
        y=cd.x[:, j], x=rest.x, y_mean=0.0, x_means=np.zeros(len(others)),
        names=rest.names, response=cd.names[j],
    )
    x_resid = fit_ols(rest_x, rank_tol=rank_tol).residuals

    xnorm_sq = float(x_resid @ x_resid)
    if xnorm_sq <= (rank_tol * np.linalg.norm(cd.x[:, j])) ** 2:
        raise CompleteMulticollinearityError(
            (cd.names[j],) + rest.names, cd.p - 1, cd.p
        )
    slope = float(x_resid @ y_resid) / xnorm_sq
    resid = y_resid - slope * x_resid
    resid_norm = float(np.linalg.norm(resid))
    y_resid_norm = float(np.linalg.norm(y_resid))
    df = cd.n - cd.p
    explained_norm = abs(slope) * np.sqrt(xnorm_sq)
    if resid_norm > EXACT_FIT_RTOL * y_resid_norm:
        t_value = np.sqrt(df) * explained_norm / resid_norm
    else:
        t_value = (np.inf if explained_norm > EXACT_FIT_RTOL * y_resid_norm
                   else 0.0)
    return FWLResult(name=cd.names[j], y_resid=y_resid, x_resid=x_resid,
                     slope=slope, t_value=float(t_value), df=df)


def t_star(fit: FitResult, cd: CenteredData, j: int) -> float:
    """Gross-projection significance: sqrt(n-p) * |slope_j| * |x_j| / |resid|.

    Never smaller than the geometric t, with equality exactly when
    regressor ``j`` is orthogonal to all the others. Infinite for a
    noise-free fit with a nonzero slope; zero for a zero slope.
    """
    j = check_index(j, fit.p)
    scaled = abs(float(fit.slopes[j])) * float(np.linalg.norm(cd.x[:, j]))
    if scaled <= EXACT_FIT_RTOL * fit.response_norm:
        return 0.0
    if fit.exact_fit:
        return np.inf
    return float(np.sqrt(fit.df) * scaled / fit.residual_norm)


class SlopeDecomposition(BaseEstimator):
    """Estimator exposing the univariate/partial slope decomposition.

    After ``fit``, the pairwise-slope matrix, the full-model partial
    slopes and the univariate slopes are available as attributes, with
    ``univariate_slopes_`` equal to
    ``pairwise_.matrix @ partial_slopes_`` up to rounding.

    Parameters
    ----------
    rank_tol : float
        Relative singular-value cutoff for the full-model fit.
    max_condition : float
        Invertibility ceiling used by :meth:`recovered_partials`.
    """

    def __init__(self, rank_tol: float = RANK_TOL,
                 max_condition: float = MAX_CONDITION):
        self.rank_tol = rank_tol
        self.max_condition = max_condition

    def fit(self, X, y):
        names = [str(c) for c in X.columns] if hasattr(X, "columns") else None
        Xm = as_float_matrix(X)
        yv = as_float_vector(y, name="y")
        cd = CenteredData.from_arrays(Xm, yv, names=names)
        self.fit_result_ = fit_ols(cd, rank_tol=self.rank_tol)
        self.pairwise_ = pairwise_slopes(cd)
        self.partial_slopes_ = self.fit_result_.slopes
        self.univariate_slopes_ = univariate_slopes(cd)
        self.condition_number_ = self.pairwise_.condition_number
        self.n_features_in_ = cd.p
        return self

    def recovered_partials(self) -> np.ndarray:
        """Partial slopes recomputed from the univariate slopes alone."""
        check_is_fitted(self, "pairwise_")
        return recover_partials(self.pairwise_, self.univariate_slopes_,
                                max_condition=self.max_condition)
