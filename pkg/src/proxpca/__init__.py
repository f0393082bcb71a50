"""Sparse PCA via proximal solvers, plus a recognition benchmark service and CLI."""

__version__ = "0.1.0"

from .classify import KernelSpec, KrrModel, kernel_matrix, krr_fit, krr_predict, nn_classify
from .datamat import (
    CenteredDataset,
    center,
    generate_synthetic,
    load_csv_dataset,
    synthetic_split,
    vectorize_image,
)
from .errors import (
    DataFormatError,
    DivergenceError,
    InvalidInputError,
    NumericError,
    ProxpcaError,
)
from .metrics import (
    ClassificationReport,
    build_report,
    confusion_counts,
    percent_str,
    plain_accuracy,
    q_accuracy,
    timed,
)
from .prox import (
    FistaState,
    ProxProblem,
    SolverConfig,
    SolverTrace,
    estimate_step,
    fista_pass,
    ista_pass,
    lasso_problem,
    soft_threshold,
    solve,
)
from .spca import (
    LoadingMatrix,
    SpcaReport,
    deflate,
    fit_pca,
    fit_sparse_pca,
    save_loadings,
    spca_problem,
    transform,
)

__all__ = [
    "__version__",
    "CenteredDataset",
    "ClassificationReport",
    "DataFormatError",
    "DivergenceError",
    "FistaState",
    "InvalidInputError",
    "KernelSpec",
    "KrrModel",
    "LoadingMatrix",
    "NumericError",
    "ProxProblem",
    "ProxpcaError",
    "SolverConfig",
    "SolverTrace",
    "SpcaReport",
    "build_report",
    "center",
    "confusion_counts",
    "deflate",
    "estimate_step",
    "fista_pass",
    "fit_pca",
    "fit_sparse_pca",
    "generate_synthetic",
    "ista_pass",
    "kernel_matrix",
    "krr_fit",
    "krr_predict",
    "lasso_problem",
    "load_csv_dataset",
    "nn_classify",
    "percent_str",
    "plain_accuracy",
    "q_accuracy",
    "save_loadings",
    "soft_threshold",
    "solve",
    "spca_problem",
    "synthetic_split",
    "timed",
    "transform",
    "vectorize_image",
]
