"""Benchmark orchestration: reduce -> classify -> score -> emit, one row per run.

A run loads train/test data (files, inline text, or a synthetic spec),
centers with the training mean, optionally rescales, fits the configured
reducer (timing exactly that fit), projects both sets, classifies, and
scores. Grids sweep (method, d) cells with identical seeds per cell.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import datamat, spca
from .classify import KernelSpec, krr_fit, krr_predict, nn_classify
from .errors import InvalidInputError, ProxpcaError
from .metrics import build_report, percent_str, timed
from .prox import SolverConfig

REDUCERS = ("none", "pca", "ista-spca", "fista-spca")
CLASSIFIERS = ("nn", "krr")
CSV_HEADER = "method,d,lambda,q_accuracy,plain_accuracy,fit_seconds,iterations,converged"


@dataclass
class SyntheticSpec:
    """Synthetic source: orthogonal-mean Gaussian classes, split per class."""

    classes: int = 3
    train_per_class: int = 8
    test_per_class: int = 4
    dims: int = 1024
    separation: float = 50.0


@dataclass
class RunConfig:
    method: str = "none"
    d: int | None = None
    lam: float | None = None
    step: float | str = "auto"
    tol: float = 1e-6
    max_iter: int = 1000
    classifier: str = "nn"
    k: int = 1
    kernel: KernelSpec = field(default_factory=KernelSpec)
    gamma: float = 0.1
    seed: int = 0
    scale: bool = False
    timing: bool = True  # False reports fit_seconds as 0.00 for byte-stable output
    # data source: paths, inline text, or synthetic (exactly one kind)
    train_data_path: str | None = None
    train_labels_path: str | None = None
    test_data_path: str | None = None
    test_labels_path: str | None = None
    train_data_text: str | None = None
    train_labels_text: str | None = None
    test_data_text: str | None = None
    test_labels_text: str | None = None
    synthetic: SyntheticSpec | None = None


@dataclass
class BenchmarkRow:
    method: str
    d: int | None
    lam: float | None
    q_accuracy: float | None
    plain_accuracy: float | None
    fit_seconds: float | None
    iterations: int
    converged: bool
    error: str | None = None
    parallel_timing: bool = False


def _staged(stage: str, err: ProxpcaError) -> ProxpcaError:
    if err.stage is None:
        err.stage = stage
    return err


def _validate(config: RunConfig) -> None:
    if config.method not in REDUCERS:
        raise InvalidInputError(f"method must be one of {REDUCERS}, got {config.method!r}")
    if config.classifier not in CLASSIFIERS:
        raise InvalidInputError(f"classifier must be one of {CLASSIFIERS}, got {config.classifier!r}")
    if config.method != "none":
        if config.d is None or config.d < 1:
            raise InvalidInputError(f"method {config.method!r} needs d >= 1, got {config.d}")
    if config.method in ("ista-spca", "fista-spca"):
        if config.lam is None or config.lam < 0:
            raise InvalidInputError(f"sparse methods need lambda >= 0, got {config.lam}")
        SolverConfig(step=config.step, tol=config.tol, max_iter=config.max_iter).validate()
    if config.classifier == "nn" and config.k < 1:
        raise InvalidInputError(f"k must be >= 1, got {config.k}")
    if config.classifier == "krr":
        config.kernel.validate()
        if not config.gamma > 0:
            raise InvalidInputError(f"gamma must be > 0, got {config.gamma}")


def _load(config: RunConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    if config.synthetic is not None:
        s = config.synthetic
        return datamat.synthetic_split(
            s.classes, s.train_per_class, s.test_per_class, s.dims, s.separation, config.seed
        )
    if config.train_data_text is not None or config.train_labels_text is not None:
        for name in ("train_data_text", "train_labels_text", "test_data_text", "test_labels_text"):
            if getattr(config, name) is None:
                raise InvalidInputError(f"inline data source incomplete: {name} missing")
        train, train_labels = datamat.parse_csv_dataset(
            config.train_data_text, config.train_labels_text, source="train"
        )
        test, test_labels = datamat.parse_csv_dataset(
            config.test_data_text, config.test_labels_text, source="test"
        )
        return train, train_labels, test, test_labels
    for name in ("train_data_path", "train_labels_path", "test_data_path", "test_labels_path"):
        if getattr(config, name) is None:
            raise InvalidInputError(f"no data source: {name} missing (give paths, inline text or synthetic)")
    train, train_labels = datamat.load_csv_dataset(config.train_data_path, config.train_labels_path)
    test, test_labels = datamat.load_csv_dataset(config.test_data_path, config.test_labels_path)
    return train, train_labels, test, test_labels


def run_pipeline(config: RunConfig) -> BenchmarkRow:
    """Execute one configuration end to end and return its table row."""
    try:
        _validate(config)
    except ProxpcaError as err:
        raise _staged("config", err)

    try:
        train, train_labels, test, test_labels = _load(config)
    except ProxpcaError as err:
        raise _staged("load", err)

    try:
        if config.scale:
            factor = float(np.abs(train).max())
            if factor > 0:
                train = train / factor
                test = test / factor
        ctrain, ctest = datamat.center(train, test)
    except ProxpcaError as err:
        raise _staged("center", err)

    iterations = 0
    converged = True
    lam_used: float | None = None
    try:
        if config.method == "none":
            fit_seconds = 0.0
            feats_train, feats_test = ctrain.data, ctest.data
        elif config.method == "pca":
            loadings, fit_seconds = timed(lambda: spca.fit_pca(ctrain, config.d))
            feats_train = spca.transform(ctrain, loadings)
            feats_test = spca.transform(ctest, loadings)
        else:
            lam_used = config.lam
            solver = SolverConfig(
                step=config.step, tol=config.tol, max_iter=config.max_iter, seed=config.seed
            )
            method = "ista" if config.method == "ista-spca" else "fista"
            report, fit_seconds = timed(
                lambda: spca.fit_sparse_pca(ctrain, config.d, config.lam, method, solver)
            )
            iterations = report.total_iterations
            converged = report.converged
            feats_train = spca.transform(ctrain, report.loadings)
            feats_test = spca.transform(ctest, report.loadings)
    except ProxpcaError as err:
        raise _staged("reduce", err)

    classes = int(max(train_labels.max(), test_labels.max())) + 1
    try:
        if config.classifier == "nn":
            pred = nn_classify(feats_train, train_labels, feats_test, k=config.k)
        else:
            model = krr_fit(feats_train, train_labels, config.kernel, config.gamma, classes=classes)
            pred = krr_predict(model, feats_test)
    except ProxpcaError as err:
        raise _staged("classify", err)

    try:
        report = build_report(pred, test_labels, classes)
    except ProxpcaError as err:
        raise _staged("score", err)

    return BenchmarkRow(
        method=config.method,
        d=config.d if config.method != "none" else None,
        lam=lam_used,
        q_accuracy=report.q_accuracy,
        plain_accuracy=report.plain_accuracy,
        fit_seconds=fit_seconds if config.timing else 0.0,
        iterations=iterations,
        converged=converged,
    )


def _error_row(method: str, d: int | None, lam: float | None, message: str) -> BenchmarkRow:
    return BenchmarkRow(
        method=method,
        d=d,
        lam=lam,
        q_accuracy=None,
        plain_accuracy=None,
        fit_seconds=None,
        iterations=0,
        converged=False,
        error=message,
    )


def run_grid(
    base: RunConfig,
    d_list: list[int],
    methods: list[str],
    parallel: bool = False,
) -> list[BenchmarkRow]:
    """Sweep methods (outer) by d (inner); failed cells become error rows.

    The baseline method "none" ignores d, so it contributes a single row.
    Every cell runs with the same seed. Parallel execution keeps the output
    order and marks rows as parallel-timed (co-running cells share cores, so
    their wall clocks are not comparable to sequential ones).
    """
    if not methods:
        raise InvalidInputError("methods list must not be empty")
    if not d_list:
        raise InvalidInputError("d list must not be empty")
    for m in methods:
        if m not in REDUCERS:
            raise InvalidInputError(f"unknown method {m!r} in grid")
    for d in d_list:
        if d < 1:
            raise InvalidInputError(f"grid d values must be >= 1, got {d}")

    cells: list[tuple[str, int | None]] = []
    for m in methods:
        if m == "none":
            cells.append((m, None))
        else:
            cells.extend((m, d) for d in d_list)

    def one(cell: tuple[str, int | None]) -> BenchmarkRow:
        m, d = cell
        cfg = replace(base, method=m, d=d)
        lam = cfg.lam if m in ("ista-spca", "fista-spca") else None
        try:
            return run_pipeline(cfg)
        except ProxpcaError as err:
            return _error_row(m, d, lam, str(err))

    if parallel:
        with ThreadPoolExecutor() as pool:
            rows = list(pool.map(one, cells))
        for row in rows:
            row.parallel_timing = True
    else:
        rows = [one(cell) for cell in cells]
    return rows


def _cells(row: BenchmarkRow) -> list[str]:
    return [
        row.method,
        "" if row.d is None else str(row.d),
        "" if row.lam is None else format(row.lam, ".6g"),
        "" if row.q_accuracy is None else percent_str(row.q_accuracy),
        "" if row.plain_accuracy is None else percent_str(row.plain_accuracy),
        "" if row.fit_seconds is None else f"{row.fit_seconds:.2f}",
        str(row.iterations),
        "true" if row.converged else "false",
    ]


def render_table(rows: list[BenchmarkRow], fmt: str = "csv") -> str:
    """Render rows as CSV or an aligned text table (both byte-stable)."""
    if not rows:
        raise InvalidInputError("no rows to emit")
    if fmt not in ("csv", "text-table"):
        raise InvalidInputError(f"format must be 'csv' or 'text-table', got {fmt!r}")
    header = CSV_HEADER.split(",")
    table = [_cells(row) for row in rows]
    if fmt == "csv":
        return "\n".join([",".join(header)] + [",".join(cells) for cells in table]) + "\n"
    widths = [max(len(header[i]), max(len(cells[i]) for cells in table)) for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for cells in table:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(cells)).rstrip())
    notes = [f"note: {row.method} d={row.d}: {row.error}" for row in rows if row.error]
    if any(row.parallel_timing for row in rows):
        notes.append("note: timings measured with parallel cells; not comparable across rows")
    lines.extend(notes)
    return "\n".join(lines) + "\n"


def emit_table(rows: list[BenchmarkRow], fmt: str = "csv", path=None) -> str:
    """Render and optionally write the table; returns the rendered text."""
    text = render_table(rows, fmt)
    if path is not None:
        with io.open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
