"""Request/response models for the benchmark service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    category: str  # config | data | numeric
    detail: str


class DatasetSource(BaseModel):
    """One dataset: inline CSV text, or a path readable by the server."""

    data_csv: str | None = None
    labels_csv: str | None = None
    data_path: str | None = None
    labels_path: str | None = None


class SyntheticSource(BaseModel):
    classes: int = 3
    train_per_class: int = 8
    test_per_class: int = 4
    dims: int = 1024
    separation: float = 50.0


class RunRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    method: str = "none"
    d: int | None = None
    lam: float | None = Field(default=None, alias="lambda")
    step: float | str = "auto"
    tol: float = 1e-6
    max_iter: int = 1000
    classifier: str = "nn"
    k: int = 1
    kernel: str = "linear"
    sigma: float = 1.0
    gamma: float = 0.1
    seed: int = 0
    scale: bool = False
    timing: bool = True
    train: DatasetSource | None = None
    test: DatasetSource | None = None
    synthetic: SyntheticSource | None = None


class GridRequest(RunRequest):
    d_list: list[int] = Field(default_factory=list)
    methods: list[str] = Field(default_factory=list)
    parallel: bool = False


class BenchmarkRowModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    method: str
    d: int | None = None
    lam: float | None = Field(default=None, alias="lambda")
    q_accuracy: float | None = None
    plain_accuracy: float | None = None
    fit_seconds: float | None = None
    iterations: int = 0
    converged: bool = False
    error: str | None = None
    parallel_timing: bool = False


class RunResponse(BaseModel):
    row: BenchmarkRowModel


class GridResponse(BaseModel):
    rows: list[BenchmarkRowModel]


class SynthRequest(BaseModel):
    classes: int = 3
    per_class: int = 8
    test_per_class: int = 0
    dims: int = 1024
    separation: float = 50.0
    seed: int = 0


class SynthResponse(BaseModel):
    train_data_csv: str
    train_labels_csv: str
    test_data_csv: str | None = None
    test_labels_csv: str | None = None
    classes: int
    dims: int
