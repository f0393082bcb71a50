"""PCA baseline and sparse PCA by sequential extraction with projection deflation."""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, replace

import numpy as np

from .datamat import CenteredDataset, as_data_matrix
from .errors import DivergenceError, InvalidInputError
from .prox import (
    ProxProblem,
    SolverConfig,
    SolverTrace,
    estimate_step,
    orient_sign,
    random_unit_vector,
    soft_threshold,
    solve,
)

ZERO_EPS = 1e-10  # entries below this count as structural zeros

METHODS = ("pca", "ista-spca", "fista-spca")


@dataclass
class LoadingMatrix:
    """p x d loading vectors, one per column; zero-flagged columns are all zero.

    Non-flagged columns have unit 2-norm. ``method`` records how the loadings
    were produced ("pca", "ista-spca" or "fista-spca").
    """

    matrix: np.ndarray     # (p, d)
    zero_flags: np.ndarray  # (d,) bool
    method: str

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]


@dataclass
class SpcaReport:
    loadings: LoadingMatrix
    traces: list[SolverTrace]
    nonzeros: list[int]
    total_wall_seconds: float

    @property
    def total_iterations(self) -> int:
        return sum(t.iterations for t in self.traces)

    @property
    def converged(self) -> bool:
        return all(t.converged or t.converged_to_zero for t in self.traces)


def spca_problem(D: np.ndarray, lam: float) -> ProxProblem:
    """Variance-maximization instance: g(x) = -x^T D^T D x, h = l1.

    grad_g(x) = -2 D^T D x, so the forward step x - s*grad expands to
    (I + 2 s D^T D) x. No objective oracle is attached; fits are timed and an
    extra matvec per pass would skew the measurement.
    """
    D = np.asarray(D, dtype=float)
    if lam < 0:
        raise InvalidInputError(f"lam must be >= 0, got {lam}")

    def grad(x: np.ndarray) -> np.ndarray:
        return -2.0 * (D.T @ (D @ x))

    return ProxProblem(dim=D.shape[1], grad_g=grad, prox_h=soft_threshold, lam=lam)


def deflate(D: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Projection deflation D (I - v v^T); the result annihilates v exactly."""
    D = as_data_matrix(D, name="D")
    v = np.asarray(v, dtype=float)
    if v.shape != (D.shape[1],):
        raise InvalidInputError(f"v must have shape ({D.shape[1]},), got {v.shape}")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-12:
        raise InvalidInputError(f"v must be unit-norm, got ||v|| = {nrm}")
    u = v / nrm
    return D - np.outer(D @ u, u)


def fit_pca(train: CenteredDataset, d: int) -> LoadingMatrix:
    """Top-d eigenvectors of D^T D, zero-flagging columns beyond the rank.

    Works on the p x p Gram when p <= n; otherwise on the n x n outer Gram
    D D^T, mapping its eigenvectors through D^T and renormalizing (the two
    routes agree; see the cross-check test).
    """
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    D = as_data_matrix(train.data, name="train.data")
    n, p = D.shape
    if p <= n:
        evals, evecs = np.linalg.eigh(D.T @ D)
    else:
        evals, inner = np.linalg.eigh(D @ D.T)
        evecs = D.T @ inner
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]

    cutoff = max(evals[0], 0.0) * max(n, p) * np.finfo(float).eps
    matrix = np.zeros((p, d))
    flags = np.ones(d, dtype=bool)
    limit = min(d, evals.shape[0])
    for j in range(limit):
        if evals[j] <= cutoff:
            break
        col = evecs[:, j]
        nrm = float(np.linalg.norm(col))
        if nrm == 0.0:
            break
        matrix[:, j] = orient_sign(col / nrm)
        flags[j] = False
    return LoadingMatrix(matrix=matrix, zero_flags=flags, method="pca")


def fit_sparse_pca(
    train: CenteredDataset,
    d: int,
    lam: float,
    method: str,
    config: SolverConfig,
) -> SpcaReport:
    """Extract up to d unit-norm sparse loadings sequentially.

    Each component solves the l1-penalized variance problem on the current
    working matrix (renormalized iteration), then the matrix is deflated by
    the component. A component collapsing to zero ends extraction: the
    remaining columns stay zero-flagged and get placeholder traces so the
    trace list always has length d.
    """
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    if method not in ("ista", "fista"):
        raise InvalidInputError(f"method must be 'ista' or 'fista', got {method!r}")
    config.validate()
    if lam < 0:
        raise InvalidInputError(f"lam must be >= 0, got {lam}")

    work = as_data_matrix(train.data, name="train.data").copy()
    p = work.shape[1]
    rng = np.random.default_rng(config.seed)
    matrix = np.zeros((p, d))
    flags = np.ones(d, dtype=bool)
    traces: list[SolverTrace] = []

    start = time.perf_counter()
    for j in range(d):
        step = config.step if not isinstance(config.step, str) else estimate_step(work)
        component_config = replace(config, step=step, normalize=True)
        problem = spca_problem(work, lam)
        x0 = random_unit_vector(p, rng)
        try:
            x, trace = solve(problem, component_config, method, x0)
        except DivergenceError as err:
            raise DivergenceError(
                f"component {j}: {err.message}", iteration=err.iteration
            ) from err
        traces.append(trace)
        if trace.converged_to_zero or float(np.linalg.norm(x)) == 0.0:
            break
        matrix[:, j] = x
        flags[j] = False
        work = deflate(work, x)
    total = time.perf_counter() - start

    while len(traces) < d:
        traces.append(
            SolverTrace(
                iterations=0,
                displacement=0.0,
                wall_seconds=0.0,
                converged=True,
                converged_to_zero=True,
            )
        )
    loadings = LoadingMatrix(matrix=matrix, zero_flags=flags, method=f"{method}-spca")
    nonzeros = [int(np.count_nonzero(np.abs(matrix[:, j]) > ZERO_EPS)) for j in range(d)]
    return SpcaReport(loadings=loadings, traces=traces, nonzeros=nonzeros, total_wall_seconds=total)


def transform(X: CenteredDataset, V: LoadingMatrix) -> np.ndarray:
    """Project rows onto the loadings: scores = X V (n x d)."""
    data = as_data_matrix(X.data, name="X.data")
    if data.shape[1] != V.rows:
        raise InvalidInputError(
            f"dimension mismatch: data has {data.shape[1]} columns, loadings have {V.rows} rows"
        )
    return data @ V.matrix


def save_loadings(V: LoadingMatrix, path) -> None:
    """CSV export (p rows, d columns) plus a line-per-column flag sidecar."""
    with io.open(path, "w", encoding="utf-8") as fh:
        for row in V.matrix:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")
    with io.open(f"{path}.flags", "w", encoding="utf-8") as fh:
        fh.write(f"# method={V.method}\n")
        for flag in V.zero_flags:
            fh.write(("zero" if flag else "unit") + "\n")
