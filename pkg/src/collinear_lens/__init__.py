"""Regression diagnostics built around the univariate/partial slope split.

The library fits ordinary least squares on mean-centered data, expresses
every fit statistic as a ratio of vector norms, decomposes univariate
slopes into partial slopes through the pairwise-slope matrix, detects and
classifies sign-expectation deviations, implements the standard remedy
catalogue (ridge, linear transforms, variable elimination, differencing),
and reproduces the sign-deviation proportions of the bivariate Monte
Carlo experiment grids.
"""

from .data import CenteredData, Dataset, center
from .exceptions import (
    CollinearLensError,
    CompleteMulticollinearityError,
    ConfigError,
    DataError,
    DegenerateRegressorError,
    NumericalError,
    OrderingMismatchError,
    StructuralCollinearityError,
)
from .regression import (
    CenteredOLS,
    ConfidenceInterval,
    FitResult,
    confidence_interval,
    conventional_stats,
    fit_ols,
    fit_univariate,
    univariate_slopes,
)
from .decomposition import (
    CumulativeWeights,
    Differences,
    FWLResult,
    PairwiseSlopes,
    SlopeDecomposition,
    cumulative_weights,
    decompose,
    fwl_residualize,
    inner_product_slope,
    pairwise_slopes,
    recover_partials,
    successive_differences,
    t_star,
)
from .diagnostics import (
    CauseHint,
    CollinearityDiagnostics,
    DiagnosticsReport,
    classify_cause,
    geometric_report,
    sign_expectation_deviation,
    vif,
)
from .remedies import (
    EliminationResult,
    RidgePath,
    RidgeShrinkagePath,
    StructureComparison,
    TransformRoundtrip,
    difference_model,
    eliminate_variable,
    linear_transform_roundtrip,
    principal_component_transform,
    ridge_path,
    structure_compare,
)
from .montecarlo import (
    DGPConfig,
    ExperimentResult,
    TableGrid,
    generate_trial,
    reproduce_table,
    reproduce_tables,
    run_experiment,
)
from .csvio import read_csv, write_csv

__version__ = "0.1.0"

__all__ = [
    "CenteredData",
    "CenteredOLS",
    "CauseHint",
    "CollinearLensError",
    "CollinearityDiagnostics",
    "CompleteMulticollinearityError",
    "ConfidenceInterval",
    "ConfigError",
    "CumulativeWeights",
    "DGPConfig",
    "DataError",
    "Dataset",
    "DegenerateRegressorError",
    "DiagnosticsReport",
    "Differences",
    "EliminationResult",
    "ExperimentResult",
    "FWLResult",
    "FitResult",
    "NumericalError",
    "OrderingMismatchError",
    "PairwiseSlopes",
    "RidgePath",
    "RidgeShrinkagePath",
    "SlopeDecomposition",
    "StructuralCollinearityError",
    "StructureComparison",
    "TableGrid",
    "TransformRoundtrip",
    "center",
    "classify_cause",
    "confidence_interval",
    "conventional_stats",
    "cumulative_weights",
    "decompose",
    "difference_model",
    "eliminate_variable",
    "fit_ols",
    "fit_univariate",
    "fwl_residualize",
    "generate_trial",
    "geometric_report",
    "inner_product_slope",
    "linear_transform_roundtrip",
    "pairwise_slopes",
    "principal_component_transform",
    "read_csv",
    "recover_partials",
    "reproduce_table",
    "reproduce_tables",
    "ridge_path",
    "run_experiment",
    "sign_expectation_deviation",
    "structure_compare",
    "successive_differences",
    "t_star",
    "univariate_slopes",
    "vif",
    "write_csv",
]
