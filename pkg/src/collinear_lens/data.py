"""Tabular containers: named columns, a designated response, centered views.

A :class:`Dataset` is the unit every analysis consumes: a set of uniquely
named numeric columns of equal length, one of which is the response. A
:class:`CenteredData` is its mean-centered view, with the per-column means
retained so fits can report an intercept on the original scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .exceptions import DataError
from .validation import as_float_matrix, as_float_vector

#: Relative slack allowed when checking that a centered column sums to zero.
CENTERING_TOL = 1e-9


@dataclass(frozen=True)
class Dataset:
    """Named numeric columns plus a designated response column.

    Parameters
    ----------
    columns : mapping or iterable of (name, values) pairs
        All columns, in order, each a length-n vector of finite numbers.
    response : str
        Name of the column to treat as the response. Must exist in
        ``columns``.
    """

    names: tuple[str, ...] = field(init=False)
    values: np.ndarray = field(init=False)
    response: str

    def __init__(self, columns, response: str):
        if isinstance(columns, Mapping):
            items = list(columns.items())
        else:
            items = [(name, vals) for name, vals in columns]
        if not items:
            raise DataError("dataset needs at least one column")
        names = tuple(str(name) for name, _ in items)
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate column names: {', '.join(dupes)}")
        if response not in names:
            raise DataError(f"response column {response!r} not found among "
                            f"columns {list(names)}")
        vectors = []
        length = None
        for name, vals in items:
            vec = as_float_vector(vals, name=f"column {name!r}")
            if length is None:
                length = vec.size
            elif vec.size != length:
                raise DataError(
                    f"column {name!r} has length {vec.size}, expected {length}"
                )
            vectors.append(vec)
        if length < 2:
            raise DataError(f"need at least 2 observations, got {length}")
        values = np.column_stack(vectors)
        values.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "response", response)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def x_names(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if n != self.response)

    @property
    def p(self) -> int:
        return len(self.names) - 1

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.names.index(name)
        except ValueError:
            raise DataError(f"no column named {name!r}") from None
        return self.values[:, idx]

    @property
    def y(self) -> np.ndarray:
        return self.column(self.response)

    @property
    def X(self) -> np.ndarray:
        idx = [i for i, n in enumerate(self.names) if n != self.response]
        return self.values[:, idx]

    def drop(self, name: str) -> "Dataset":
        """New Dataset without the named explanatory column."""
        if name == self.response:
            raise DataError("cannot drop the response column")
        if name not in self.names:
            raise DataError(f"no column named {name!r}")
        cols = [(n, self.column(n)) for n in self.names if n != name]
        return Dataset(cols, self.response)

    def differenced(self) -> "Dataset":
        """Dataset of successive differences of every column, n-1 rows."""
        if self.n < 3:
            raise DataError("differencing needs at least 3 observations")
        cols = [(n, np.diff(self.column(n))) for n in self.names]
        return Dataset(cols, self.response)

    @classmethod
    def from_arrays(cls, X, y, names: Iterable[str] | None = None,
                    response: str = "y") -> "Dataset":
        """Build from a design matrix and response vector."""
        from .validation import resolve_feature_names

        Xm = as_float_matrix(X)
        yv = as_float_vector(y, name="y")
        if Xm.shape[0] != yv.size:
            raise DataError(
                f"X has {Xm.shape[0]} rows but y has {yv.size} entries"
            )
        xnames = resolve_feature_names(X, Xm.shape[1], names)
        if response in xnames:
            raise DataError(f"response name {response!r} collides with a "
                            "feature name")
        cols = [(name, Xm[:, i]) for i, name in enumerate(xnames)]
        cols.append((response, yv))
        return cls(cols, response)


@dataclass(frozen=True)
class CenteredData:
    """Mean-centered response and regressors, with the means kept around.

    Attributes
    ----------
    y : ndarray, shape (n,)
        Centered response.
    x : ndarray, shape (n, p)
        Centered regressors, one column per explanatory variable.
    y_mean, x_means
        The subtracted means.
    names : tuple of str
        Regressor names, same order as the columns of ``x``.
    """

    y: np.ndarray
    x: np.ndarray
    y_mean: float
    x_means: np.ndarray
    names: tuple[str, ...]
    response: str = "y"

    def __post_init__(self):
        n, p = self.x.shape
        if p < 1:
            raise DataError("need at least one explanatory column")
        if n <= p:
            raise DataError(f"need n > p, got n={n}, p={p}")
        scale = max(float(np.max(np.abs(self.x), initial=0.0)),
                    float(np.max(np.abs(self.y), initial=0.0)), 1.0)
        sums = np.abs(np.concatenate(([self.y.sum()], self.x.sum(axis=0))))
        if np.any(sums > CENTERING_TOL * n * scale):
            raise DataError("centered columns do not sum to zero")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @classmethod
    def from_arrays(cls, X, y, names: Iterable[str] | None = None,
                    response: str = "y") -> "CenteredData":
        """Center raw arrays; the one constructor every fit path goes through."""
        from .validation import resolve_feature_names

        Xm = as_float_matrix(X)
        yv = as_float_vector(y, name="y")
        if Xm.shape[0] != yv.size:
            raise DataError(
                f"X has {Xm.shape[0]} rows but y has {yv.size} entries"
            )
        xnames = resolve_feature_names(X, Xm.shape[1], names)
        x_means = Xm.mean(axis=0)
        y_mean = float(yv.mean())
        xc = Xm - x_means
        yc = yv - y_mean
        for arr in (xc, yc, x_means):
            arr.setflags(write=False)
        return cls(y=yc, x=xc, y_mean=y_mean, x_means=x_means,
                   names=xnames, response=response)


def center(data: Dataset) -> CenteredData:
    """Mean-center every column of a dataset.

    Returns a :class:`CenteredData` whose vectors are the originals minus
    their column means, with the means recorded.
    """
    return CenteredData.from_arrays(data.X, data.y, names=data.x_names,
                                    response=data.response)


def center_column(values) -> tuple[np.ndarray, float]:
    """Center a single vector; returns (centered, mean)."""
    vec = as_float_vector(values)
    if vec.size < 2:
        raise DataError(f"need at least 2 observations, got {vec.size}")
    mean = float(vec.mean())
    return vec - mean, mean
