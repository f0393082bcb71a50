"""Recognizers over (possibly reduced) feature vectors: 1-NN and kernel ridge regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .datamat import as_data_matrix, n_classes
from .errors import InvalidInputError, NumericError


@dataclass
class KernelSpec:
    kind: str = "linear"  # "linear" | "rbf"
    sigma: float = 1.0    # rbf bandwidth

    def validate(self) -> None:
        if self.kind not in ("linear", "rbf"):
            raise InvalidInputError(f"kernel kind must be 'linear' or 'rbf', got {self.kind!r}")
        if self.kind == "rbf" and not self.sigma > 0:
            raise InvalidInputError(f"rbf sigma must be > 0, got {self.sigma}")


@dataclass
class KrrModel:
    alpha: np.ndarray           # (n, C) dual coefficients
    train_features: np.ndarray  # (n, p), retained for prediction
    spec: KernelSpec
    gamma: float


def kernel_matrix(A: np.ndarray, B: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Pairwise kernel values; linear dot products or rbf exp(-||a-b||^2 / (2 sigma^2))."""
    spec.validate()
    A = as_data_matrix(A, name="A")
    B = as_data_matrix(B, name="B")
    if A.shape[1] != B.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: A has {A.shape[1]} columns, B has {B.shape[1]}"
        )
    if spec.kind == "linear":
        return A @ B.T
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * spec.sigma**2))


def krr_fit(
    train: np.ndarray,
    labels: np.ndarray,
    spec: KernelSpec,
    gamma: float,
    classes: int | None = None,
) -> KrrModel:
    """Solve (K + gamma I) alpha = Y for one-hot targets Y.

    gamma must be strictly positive so the system is positive definite. The
    solve is rejected if the residual exceeds 1e-8 * ||Y||.
    """
    if not gamma > 0:
        raise InvalidInputError(f"gamma must be > 0, got {gamma}")
    train = as_data_matrix(train, name="train")
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (train.shape[0],):
        raise InvalidInputError(
            f"labels must have shape ({train.shape[0]},), got {labels.shape}"
        )
    C = n_classes(labels) if classes is None else int(classes)
    if C < 1 or labels.max() >= C:
        raise InvalidInputError(f"labels must lie in [0, {C})")
    n = train.shape[0]
    Y = np.zeros((n, C))
    Y[np.arange(n), labels] = 1.0
    K = kernel_matrix(train, train, spec)
    system = K + gamma * np.eye(n)
    try:
        alpha = scipy.linalg.solve(system, Y, assume_a="pos")
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise NumericError(f"kernel ridge solve failed: {err}") from err
    residual = float(np.linalg.norm(system @ alpha - Y))
    if residual > 1e-8 * float(np.linalg.norm(Y)):
        raise NumericError(f"kernel ridge solve residual too large: {residual:g}")
    return KrrModel(alpha=alpha, train_features=train, spec=spec, gamma=gamma)


def krr_predict(model: KrrModel, test: np.ndarray) -> np.ndarray:
    """argmax over class scores K(test, train) alpha; ties go to the smaller class."""
    test = as_data_matrix(test, name="test")
    if test.shape[1] != model.train_features.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: test has {test.shape[1]} columns, "
            f"model expects {model.train_features.shape[1]}"
        )
    scores = kernel_matrix(test, model.train_features, model.spec) @ model.alpha
    return np.argmax(scores, axis=1)


def nn_classify(
    train: np.ndarray,
    labels: np.ndarray,
    test: np.ndarray,
    k: int = 1,
) -> np.ndarray:
    """k-nearest-neighbor labels under the Euclidean metric (k = 1 by default).

    Distance ties prefer the lower training index; for k > 1, vote ties are
    broken by the nearest member of the tied classes.
    """
    train = as_data_matrix(train, name="train")
    test = as_data_matrix(test, name="test")
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (train.shape[0],):
        raise InvalidInputError(
            f"labels must have shape ({train.shape[0]},), got {labels.shape}"
        )
    if train.shape[1] != test.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: train has {train.shape[1]} columns, test has {test.shape[1]}"
        )
    if k < 1 or k > train.shape[0]:
        raise InvalidInputError(f"k must be in [1, {train.shape[0]}], got {k}")

    diffs = test[:, None, :] - train[None, :, :]
    dists = np.einsum("ijk,ijk->ij", diffs, diffs)  # squared distances, (m, n)
    if k == 1:
        return labels[np.argmin(dists, axis=1)]

    out = np.empty(test.shape[0], dtype=int)
    C = n_classes(labels)
    for i in range(test.shape[0]):
        order = np.argsort(dists[i], kind="stable")[:k]
        votes = np.bincount(labels[order], minlength=C)
        best = votes.max()
        tied = set(np.flatnonzero(votes == best))
        for idx in order:
            if labels[idx] in tied:
                out[i] = labels[idx]
                break
    return out
