"""FastAPI wrapper around the benchmark pipeline."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, datamat
from ..classify import KernelSpec
from ..errors import ProxpcaError
from ..pipeline import BenchmarkRow, RunConfig, SyntheticSpec, run_grid, run_pipeline
from .schemas import (
    BenchmarkRowModel,
    DatasetSource,
    GridRequest,
    GridResponse,
    HealthResponse,
    RunRequest,
    RunResponse,
    SynthRequest,
    SynthResponse,
)


def _apply_source(config_kwargs: dict, prefix: str, source: DatasetSource | None) -> None:
    if source is None:
        return
    config_kwargs[f"{prefix}_data_text"] = source.data_csv
    config_kwargs[f"{prefix}_labels_text"] = source.labels_csv
    config_kwargs[f"{prefix}_data_path"] = source.data_path
    config_kwargs[f"{prefix}_labels_path"] = source.labels_path


def to_run_config(req: RunRequest) -> RunConfig:
    kwargs: dict = dict(
        method=req.method,
        d=req.d,
        lam=req.lam,
        step=req.step,
        tol=req.tol,
        max_iter=req.max_iter,
        classifier=req.classifier,
        k=req.k,
        kernel=KernelSpec(kind=req.kernel, sigma=req.sigma),
        gamma=req.gamma,
        seed=req.seed,
        scale=req.scale,
        timing=req.timing,
    )
    _apply_source(kwargs, "train", req.train)
    _apply_source(kwargs, "test", req.test)
    if req.synthetic is not None:
        s = req.synthetic
        kwargs["synthetic"] = SyntheticSpec(
            classes=s.classes,
            train_per_class=s.train_per_class,
            test_per_class=s.test_per_class,
            dims=s.dims,
            separation=s.separation,
        )
    return RunConfig(**kwargs)


def row_model(row: BenchmarkRow) -> BenchmarkRowModel:
    return BenchmarkRowModel(
        method=row.method,
        d=row.d,
        lam=row.lam,
        q_accuracy=row.q_accuracy,
        plain_accuracy=row.plain_accuracy,
        fit_seconds=row.fit_seconds,
        iterations=row.iterations,
        converged=row.converged,
        error=row.error,
        parallel_timing=row.parallel_timing,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="proxpca benchmark service", version=__version__)

    @app.exception_handler(ProxpcaError)
    async def proxpca_error(_: Request, err: ProxpcaError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"category": err.category, "detail": str(err)})

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest) -> RunResponse:
        row = run_pipeline(to_run_config(req))
        return RunResponse(row=row_model(row))

    @app.post("/grid", response_model=GridResponse)
    def grid(req: GridRequest) -> GridResponse:
        rows = run_grid(to_run_config(req), req.d_list, req.methods, parallel=req.parallel)
        return GridResponse(rows=[row_model(r) for r in rows])

    @app.post("/synth", response_model=SynthResponse)
    def synth(req: SynthRequest) -> SynthResponse:
        if req.test_per_class > 0:
            train, train_labels, test, test_labels = datamat.synthetic_split(
                req.classes, req.per_class, req.test_per_class, req.dims, req.separation, req.seed
            )
            return SynthResponse(
                train_data_csv=datamat.format_csv(train),
                train_labels_csv=datamat.format_labels(train_labels),
                test_data_csv=datamat.format_csv(test),
                test_labels_csv=datamat.format_labels(test_labels),
                classes=req.classes,
                dims=req.dims,
            )
        data, labels = datamat.generate_synthetic(
            req.classes, req.per_class, req.dims, req.separation, req.seed
        )
        return SynthResponse(
            train_data_csv=datamat.format_csv(data),
            train_labels_csv=datamat.format_labels(labels),
            classes=req.classes,
            dims=req.dims,
        )

    return app
