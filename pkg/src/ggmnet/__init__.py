"""Sparse Gaussian graphical model networks via adaptive graphical lasso.

Estimates a sparse precision matrix on small-sample high-dimensional data,
turns it into a weighted network, and analyzes that network with
random-walk community detection, centrality measures, and bootstrap
stability assessment.
"""

__version__ = "0.1.0"

from .bootstrap import (
    BootstrapConfig,
    BootstrapSummary,
    bootstrap_centrality,
    centrality_rank_stability,
)
from .community import Partition, TransitionMatrix, modularity, transition_matrix, walk_distance, walktrap
from .cv import CvConfig, CvResult, cross_validate, fold_loss, lambda_grid, make_folds
from .data import (
    CovarianceMatrix,
    RawDataset,
    StandardizedMatrix,
    load_csv,
    ridge_condition,
    sample_covariance,
    standardize,
)
from .errors import GgmnetError, NumericalError, ValidationError
from .estimator import (
    PenaltyWeights,
    PrecisionEstimate,
    adaptive_glasso_fit,
    adaptive_weights,
    glasso_fit,
    kkt_residual,
    objective,
)
from .netgraph import (
    CentralitySummary,
    WeightedNetwork,
    centrality_summary,
    closeness,
    precision_to_adjacency,
    shortest_paths,
    strength,
    weighted_betweenness,
)
from .simulate import SyntheticSpec, simulate, true_precision

__all__ = [
    "BootstrapConfig",
    "BootstrapSummary",
    "CentralitySummary",
    "CovarianceMatrix",
    "CvConfig",
    "CvResult",
    "GgmnetError",
    "NumericalError",
    "Partition",
    "PenaltyWeights",
    "PrecisionEstimate",
    "RawDataset",
    "StandardizedMatrix",
    "SyntheticSpec",
    "TransitionMatrix",
    "ValidationError",
    "WeightedNetwork",
    "adaptive_glasso_fit",
    "adaptive_weights",
    "bootstrap_centrality",
    "centrality_rank_stability",
    "centrality_summary",
    "closeness",
    "cross_validate",
    "fold_loss",
    "glasso_fit",
    "kkt_residual",
    "lambda_grid",
    "load_csv",
    "make_folds",
    "modularity",
    "objective",
    "precision_to_adjacency",
    "ridge_condition",
    "sample_covariance",
    "shortest_paths",
    "simulate",
    "standardize",
    "strength",
    "transition_matrix",
    "true_precision",
    "walk_distance",
    "walktrap",
    "weighted_betweenness",
]
