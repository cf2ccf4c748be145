"""The remedy catalogue: ridge paths, linear transforms, elimination, differencing.

Each routine demonstrates a concrete, checkable property of the remedy it
implements: ridge shrinks the coefficient norm monotonically; an invertible
linear transform of the regressors changes nothing once substituted back;
removing a variable redistributes its univariate slope across the survivors
exactly as the pairwise-slope matrix predicts; and differencing preserves
the large-sample parameter structure while inflating variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .data import CenteredData, Dataset, center
from .decomposition import pairwise_slopes, recover_partials
from .exceptions import DataError
from .regression import RANK_TOL, FitResult, fit_ols, univariate_slopes
from .validation import as_float_matrix, as_float_vector

#: Default log-grid span, as multiples of the mean diagonal of X'X.
DEFAULT_GRID_SPAN = (1e-4, 1e4)
DEFAULT_GRID_POINTS = 50


@dataclass(frozen=True)
class RidgePath:
    """Coefficients along an ascending grid of ridge penalties."""

    lambdas: np.ndarray
    coefficients: np.ndarray  # shape (len(lambdas), p)
    norms: np.ndarray
    names: tuple[str, ...]


@dataclass(frozen=True)
class TransformRoundtrip:
    """Fit in transformed coordinates plus the back-substituted slopes."""

    transformed_fit: FitResult
    back_substituted: np.ndarray
    transform: np.ndarray


@dataclass(frozen=True)
class EliminationResult:
    """Effect of dropping one explanatory column."""

    removed: str
    reduced_fit: FitResult
    delta_r_squared: float
    redistributed: np.ndarray  # decomposition-theorem prediction of the
    # reduced-model slopes from the surviving univariate slopes


@dataclass(frozen=True)
class StructureComparison:
    """Original-model vs difference-model parameter structure."""

    names: tuple[str, ...]
    original_partials: np.ndarray
    difference_partials: np.ndarray
    original_univariates: np.ndarray
    difference_univariates: np.ndarray
    max_abs_gap: float
    sign_agreement: tuple[bool, ...]


def default_lambda_grid(cd: CenteredData,
                        n_points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Log grid spanning 1e-4 to 1e4 times the mean diagonal of X'X."""
    scale = float(np.mean(np.einsum("ij,ij->j", cd.x, cd.x)))
    lo, hi = DEFAULT_GRID_SPAN
    return np.geomspace(lo * scale, hi * scale, n_points)


def ridge_path(cd: CenteredData, lambdas=None,
               rank_tol: float = RANK_TOL) -> RidgePath:
    """Solve (X'X + lambda I) b = X'y for every penalty on the grid.

    The grid must be non-negative and ascending. A zero penalty is allowed
    only on a full-rank design; positive penalties are always well posed.
    """
    if lambdas is None:
        grid = default_lambda_grid(cd)
    else:
        grid = as_float_vector(lambdas, name="lambdas")
        if grid.size == 0:
            raise ValueError("lambda grid is empty")
        if np.any(grid < 0.0):
            raise ValueError("lambda grid must be non-negative")
        if np.any(np.diff(grid) < 0.0):
            raise ValueError("lambda grid must be ascending")

    if grid[0] == 0.0:
        # a zero penalty needs full rank; let the OLS path run its check
        # and raise the standard error naming the dependent columns
        fit_ols(cd, rank_tol=rank_tol)

    gram = cd.x.T @ cd.x
    xty = cd.x.T @ cd.y
    evals, evecs = np.linalg.eigh(gram)
    evals = np.clip(evals, 0.0, None)  # gram is PSD; clip rounding noise

    rotated = evecs.T @ xty
    coefs = np.empty((grid.size, cd.p))
    for i, lam in enumerate(grid):
        coefs[i] = evecs @ (rotated / (evals + lam))
    norms = np.linalg.norm(coefs, axis=1)
    return RidgePath(lambdas=grid, coefficients=coefs, norms=norms,
                     names=cd.names)


def linear_transform_roundtrip(data: Dataset, transform,
                               rank_tol: float = RANK_TOL,
                               max_condition: float = 1e12
                               ) -> TransformRoundtrip:
    """Fit on linearly transformed regressors and substitute back.

    The regressor rows are mapped through ``transform`` (z = T x per
    observation), the response is fit on the new columns, and the slopes
    are mapped back through T'. For any invertible T the back-substituted
    slopes, the fitted values and the residuals reproduce the plain fit.
    """
    T = as_float_matrix(transform, name="transform")
    p = data.p
    if T.shape != (p, p):
        raise ValueError(f"transform must be {p}x{p}, got {T.shape}")
    cond = np.linalg.cond(T)
    if not np.isfinite(cond) or cond >= max_condition:
        raise ValueError(
            f"transform is singular or near-singular (condition {cond:.3e})"
        )
    z = data.X @ T.T
    znames = tuple(f"z{i + 1}" for i in range(p))
    if data.response in znames:
        znames = tuple(f"transformed_{i + 1}" for i in range(p))
    zdata = Dataset.from_arrays(z, data.y, names=znames,
                                response=data.response)
    zfit = fit_ols(center(zdata), rank_tol=rank_tol)
    back = T.T @ zfit.slopes
    return TransformRoundtrip(transformed_fit=zfit, back_substituted=back,
                              transform=T)


def principal_component_transform(cd: CenteredData) -> np.ndarray:
    """Rotation whose transformed regressors are mutually orthogonal.

    Rows are the eigenvectors of the centered Gram matrix, so
    ``X @ T.T`` has a diagonal Gram.
    """
    gram = cd.x.T @ cd.x
    _, evecs = np.linalg.eigh(gram)
    return evecs.T


def eliminate_variable(data: Dataset, target) -> EliminationResult:
    """Refit without one explanatory column and report the fallout.

    ``target`` is an explanatory column name or index. The result carries
    the reduced fit, the R-squared loss, and the reduced-model slopes as
    predicted by redistributing the surviving univariate slopes through
    the surviving pairwise-slope submatrix.
    """
    xnames = data.x_names
    if data.p < 2:
        raise DataError("cannot eliminate from a single-regressor model")
    if isinstance(target, str):
        if target not in xnames:
            raise DataError(f"no explanatory column named {target!r}")
        name = target
    else:
        idx = int(target)
        if not -data.p <= idx < data.p:
            raise IndexError(f"regressor index {idx} out of range")
        name = xnames[idx % data.p]

    full_fit = fit_ols(center(data))
    reduced = data.drop(name)
    reduced_cd = center(reduced)
    reduced_fit = fit_ols(reduced_cd)

    sub_pairwise = pairwise_slopes(reduced_cd)
    sub_univariate = univariate_slopes(reduced_cd)
    redistributed = recover_partials(sub_pairwise, sub_univariate)

    return EliminationResult(
        removed=name,
        reduced_fit=reduced_fit,
        delta_r_squared=full_fit.r_squared - reduced_fit.r_squared,
        redistributed=redistributed,
    )


def difference_model(data: Dataset, rank_tol: float = RANK_TOL) -> FitResult:
    """Fit the model on successive differences of every column.

    The differenced data is centered and fit through the origin like any
    other fit here, over n - 1 rows. Only meaningful when the observation
    order is; asserting that is the caller's job.
    """
    if data.n < 3:
        raise DataError("differencing needs at least 3 observations")
    if data.n - 1 <= data.p:
        raise DataError(
            f"insufficient differenced sample: {data.n - 1} rows for "
            f"{data.p} regressors"
        )
    return fit_ols(center(data.differenced()), rank_tol=rank_tol)


def _sign_with_tol(values: np.ndarray) -> np.ndarray:
    tol = 1e-12 * max(1.0, float(np.max(np.abs(values), initial=0.0)))
    return np.where(np.abs(values) <= tol, 0, np.sign(values)).astype(int)


def structure_compare(original: FitResult, differenced: FitResult,
                      data: Dataset) -> StructureComparison:
    """Line up the original and difference-model parameter structures."""
    if original.names != differenced.names:
        raise ValueError(
            "fits cover different variable sets: "
            f"{original.names} vs {differenced.names}"
        )
    orig_uni = univariate_slopes(center(data))
    diff_uni = univariate_slopes(center(data.differenced()))
    gap = float(np.max(np.abs(original.slopes - differenced.slopes)))
    s_orig = _sign_with_tol(original.slopes)
    s_diff = _sign_with_tol(differenced.slopes)
    agreement = tuple(bool(a * b >= 0) for a, b in zip(s_orig, s_diff))
    return StructureComparison(
        names=original.names,
        original_partials=original.slopes,
        difference_partials=differenced.slopes,
        original_univariates=orig_uni,
        difference_univariates=diff_uni,
        max_abs_gap=gap,
        sign_agreement=agreement,
    )


class RidgeShrinkagePath(BaseEstimator):
    """Estimator computing ridge coefficients along a penalty grid.

    Parameters
    ----------
    lambdas : array-like or None
        Ascending non-negative penalty grid; None picks the default log
        grid sized to the data.
    """

    def __init__(self, lambdas=None):
        self.lambdas = lambdas

    def fit(self, X, y):
        names = [str(c) for c in X.columns] if hasattr(X, "columns") else None
        Xm = as_float_matrix(X)
        yv = as_float_vector(y, name="y")
        cd = CenteredData.from_arrays(Xm, yv, names=names)
        path = ridge_path(cd, lambdas=self.lambdas)
        self.path_ = path
        self.lambdas_ = path.lambdas
        self.coef_path_ = path.coefficients
        self.norms_ = path.norms
        self.n_features_in_ = cd.p
        return self
