"""Dataset handling: CSV ingestion, image vectorization, centering, synthetic data."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError, InvalidInputError


@dataclass
class CenteredDataset:
    """A data matrix with the (training) column mean that was subtracted."""

    data: np.ndarray  # (n, p)
    mean: np.ndarray  # (p,)


def as_data_matrix(values, name: str = "data") -> np.ndarray:
    """Validate and return an (n, p) float matrix with finite entries."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def vectorize_image(grid) -> np.ndarray:
    """Flatten an h x w grid row by row into a length h*w vector."""
    arr = as_data_matrix(grid, name="grid")
    return arr.reshape(-1)


def _parse_data_lines(lines: list[str], source: str) -> np.ndarray:
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        cells = line.split(",")
        try:
            row = [float(c) for c in cells]
        except ValueError:
            raise DataFormatError(f"{source}: non-numeric cell at line {lineno}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DataFormatError(
                f"{source}: ragged row at line {lineno} ({len(row)} cells, expected {width})"
            )
        rows.append(row)
    if not rows:
        raise DataFormatError(f"{source}: empty file (no rows at line 1)")
    return as_data_matrix(rows, name=source)


def _parse_label_lines(lines: list[str], source: str) -> np.ndarray:
    raw = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            raise DataFormatError(f"{source}: blank label at line {lineno}")
        raw.append(text)
    if not raw:
        raise DataFormatError(f"{source}: empty file (no labels at line 1)")
    try:
        labels = [int(t) for t in raw]
    except ValueError:
        # Non-integer alphabets are mapped to ids by first appearance.
        seen: dict[str, int] = {}
        labels = [seen.setdefault(t, len(seen)) for t in raw]
    arr = np.asarray(labels, dtype=int)
    if arr.min() < 0:
        bad = int(np.argmin(arr)) + 1
        raise DataFormatError(f"{source}: negative label at line {bad}")
    return arr


def _nonblank_lines(text: str) -> list[str]:
    return [line for line in text.splitlines() if line.strip()]


def parse_csv_dataset(data_text: str, labels_text: str, source: str = "inline") -> tuple[np.ndarray, np.ndarray]:
    """Parse a data CSV and a label file from strings; rows align by index."""
    data = _parse_data_lines(_nonblank_lines(data_text), f"{source} data")
    labels = _parse_label_lines(_nonblank_lines(labels_text), f"{source} labels")
    if data.shape[0] != labels.shape[0]:
        raise DataFormatError(
            f"{source}: row-count mismatch, {data.shape[0]} data rows vs {labels.shape[0]} labels"
        )
    return data, labels


def load_csv_dataset(data_path, labels_path) -> tuple[np.ndarray, np.ndarray]:
    """Load one sample per CSV row plus one integer label per line."""
    with io.open(data_path, "r", encoding="utf-8") as fh:
        data_text = fh.read()
    with io.open(labels_path, "r", encoding="utf-8") as fh:
        labels_text = fh.read()
    data = _parse_data_lines(_nonblank_lines(data_text), str(data_path))
    labels = _parse_label_lines(_nonblank_lines(labels_text), str(labels_path))
    if data.shape[0] != labels.shape[0]:
        raise DataFormatError(
            f"row-count mismatch: {data_path} has {data.shape[0]} rows, "
            f"{labels_path} has {labels.shape[0]} labels"
        )
    return data, labels


def n_classes(labels: np.ndarray) -> int:
    labels = np.asarray(labels, dtype=int)
    if labels.size == 0:
        raise InvalidInputError("empty label vector")
    return int(labels.max()) + 1


def write_csv(matrix: np.ndarray, path) -> None:
    """Write a matrix as plain CSV at full double precision (17 significant digits)."""
    arr = as_data_matrix(matrix)
    with io.open(path, "w", encoding="utf-8") as fh:
        fh.write(format_csv(arr))


def format_csv(matrix: np.ndarray) -> str:
    arr = as_data_matrix(matrix)
    lines = [",".join(format(v, ".17g") for v in row) for row in arr]
    return "\n".join(lines) + "\n"


def format_labels(labels: np.ndarray) -> str:
    return "\n".join(str(int(v)) for v in np.asarray(labels, dtype=int)) + "\n"


def write_labels(labels: np.ndarray, path) -> None:
    with io.open(path, "w", encoding="utf-8") as fh:
        fh.write(format_labels(labels))


def center(train: np.ndarray, test: np.ndarray) -> tuple[CenteredDataset, CenteredDataset]:
    """Subtract the training column mean from both matrices."""
    train = as_data_matrix(train, name="train")
    test = as_data_matrix(test, name="test")
    if train.shape[1] != test.shape[1]:
        raise InvalidInputError(
            f"column mismatch: train has {train.shape[1]} columns, test has {test.shape[1]}"
        )
    mean = train.mean(axis=0)
    return CenteredDataset(train - mean, mean), CenteredDataset(test - mean, mean)


def generate_synthetic(
    classes: int,
    per_class: int,
    dims: int,
    separation: float,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian class clouds with pairwise-orthogonal means of norm ``separation``.

    Class means are an orthonormal frame (drawn from ``seed``) scaled by
    ``separation``; samples add isotropic unit-variance noise. Deterministic
    for a fixed seed.
    """
    if classes < 1 or per_class < 1 or dims < 1:
        raise InvalidInputError("classes, per_class and dims must all be >= 1")
    if separation < 0:
        raise InvalidInputError("separation must be >= 0")
    if classes > dims:
        raise InvalidInputError(
            f"cannot place {classes} orthogonal class means in {dims} dimensions"
        )
    rng = np.random.default_rng(seed)
    frame = np.linalg.qr(rng.standard_normal((dims, classes)))[0]  # (dims, classes), orthonormal
    means = separation * frame.T
    data = np.empty((classes * per_class, dims))
    labels = np.empty(classes * per_class, dtype=int)
    for c in range(classes):
        block = slice(c * per_class, (c + 1) * per_class)
        data[block] = means[c] + rng.standard_normal((per_class, dims))
        labels[block] = c
    return data, labels


def synthetic_split(
    classes: int,
    train_per_class: int,
    test_per_class: int,
    dims: int,
    separation: float,
    seed: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Draw one synthetic set and split it per class into train/test parts.

    Both parts share the same class means (single draw), so the test cloud is
    distributed identically to the training cloud.
    """
    if test_per_class < 0:
        raise InvalidInputError("test_per_class must be >= 0")
    total = train_per_class + test_per_class
    data, labels = generate_synthetic(classes, total, dims, separation, seed)
    train_idx = []
    test_idx = []
    for c in range(classes):
        start = c * total
        train_idx.extend(range(start, start + train_per_class))
        test_idx.extend(range(start + train_per_class, start + total))
    return data[train_idx], labels[train_idx], data[test_idx], labels[test_idx]
