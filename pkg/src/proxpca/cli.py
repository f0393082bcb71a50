"""Command-line client for the benchmark service.

By default commands run against an in-process instance of the service (no
socket); pass ``--server URL`` (or set PROXPCA_SERVER) to talk to a running
deployment instead. Exit codes: 0 success, 2 configuration error, 3 data or
I/O error, 4 numeric failure.
"""

from __future__ import annotations

import sys

import click
import httpx

from . import __version__
from .pipeline import CLASSIFIERS, REDUCERS, BenchmarkRow, emit_table

EXIT_CODES = {"config": 2, "data": 3, "numeric": 4}


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings

    from .service.app import create_app

    with warnings.catch_warnings():
        # starlette warns about its httpx-based TestClient; harmless here
        warnings.filterwarnings("ignore", message=".*testclient.*")
        from starlette.testclient import TestClient

        return TestClient(create_app())


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        try:
            resp = client.post(path, json=payload)
        except httpx.HTTPError as err:
            click.echo(f"error (data): cannot reach service: {err}", err=True)
            sys.exit(EXIT_CODES["data"])
    if resp.status_code != 200:
        try:
            body = resp.json()
        except ValueError:
            body = {}
        category = body.get("category", "config")
        detail = body.get("detail", resp.text)
        click.echo(f"error ({category}): {detail}", err=True)
        sys.exit(EXIT_CODES.get(category, 1))
    return resp.json()


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        click.echo(f"error (data): cannot read {path}: {err}", err=True)
        sys.exit(EXIT_CODES["data"])


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as err:
        click.echo(f"error (data): cannot write {path}: {err}", err=True)
        sys.exit(EXIT_CODES["data"])


def _dataset_payload(data_path: str | None, labels_path: str | None, which: str) -> dict | None:
    if (data_path is None) != (labels_path is None):
        click.echo(f"error (config): {which} needs both a data file and a labels file", err=True)
        sys.exit(EXIT_CODES["config"])
    if data_path is None:
        return None
    return {"data_csv": _read_text(data_path), "labels_csv": _read_text(labels_path)}


def _parse_step(step: str):
    if step == "auto":
        return "auto"
    try:
        return float(step)
    except ValueError:
        click.echo(f"error (config): --step must be a number or 'auto', got {step!r}", err=True)
        sys.exit(EXIT_CODES["config"])


def _row_from_json(obj: dict) -> BenchmarkRow:
    return BenchmarkRow(
        method=obj["method"],
        d=obj.get("d"),
        lam=obj.get("lambda"),
        q_accuracy=obj.get("q_accuracy"),
        plain_accuracy=obj.get("plain_accuracy"),
        fit_seconds=obj.get("fit_seconds"),
        iterations=obj.get("iterations", 0),
        converged=obj.get("converged", False),
        error=obj.get("error"),
        parallel_timing=obj.get("parallel_timing", False),
    )


def _emit(rows: list[BenchmarkRow], fmt: str, out: str | None) -> None:
    try:
        text = emit_table(rows, fmt, out)
    except OSError as err:
        click.echo(f"error (data): cannot write {out}: {err}", err=True)
        sys.exit(EXIT_CODES["data"])
    if out is None:
        click.echo(text, nl=False)


def _data_options(fn):
    for opt in reversed(
        [
            click.option("--train", "train_path", metavar="CSV", help="Training data CSV (one sample per row)."),
            click.option("--train-labels", "train_labels_path", metavar="FILE", help="Training labels, one integer per line."),
            click.option("--test", "test_path", metavar="CSV", help="Test data CSV."),
            click.option("--test-labels", "test_labels_path", metavar="FILE", help="Test labels file."),
            click.option("--synth-classes", type=int, default=None, help="Use a synthetic dataset with this many classes instead of files."),
            click.option("--synth-train-per-class", type=int, default=8, show_default=True),
            click.option("--synth-test-per-class", type=int, default=4, show_default=True),
            click.option("--synth-dims", type=int, default=1024, show_default=True),
            click.option("--synth-separation", type=float, default=50.0, show_default=True),
        ]
    ):
        fn = opt(fn)
    return fn


def _model_options(fn):
    for opt in reversed(
        [
            click.option("--method", type=click.Choice(REDUCERS), default="none", show_default=True),
            click.option("--d", type=int, default=None, help="Number of components for the reducer."),
            click.option("--lambda", "lam", type=float, default=None, help="Sparsity weight (required for sparse methods; no published default exists)."),
            click.option("--step", default="auto", show_default=True, help="Gradient step size, or 'auto' for 1/(2*lambda_max)."),
            click.option("--tol", type=float, default=1e-6, show_default=True),
            click.option("--max-iter", type=int, default=1000, show_default=True),
            click.option("--classifier", type=click.Choice(CLASSIFIERS), default="nn", show_default=True),
            click.option("--k", type=int, default=1, show_default=True, help="Neighbor count for nn."),
            click.option("--kernel", type=click.Choice(("linear", "rbf")), default="linear", show_default=True),
            click.option("--sigma", type=float, default=1.0, show_default=True, help="rbf bandwidth."),
            click.option("--gamma", type=float, default=0.1, show_default=True, help="Ridge weight for krr."),
            click.option("--seed", type=int, default=0, show_default=True),
            click.option("--scale", is_flag=True, help="Rescale intensities by the training max before centering."),
            click.option("--timing/--no-timing", default=True, help="--no-timing reports fit_seconds as 0.00 so outputs are byte-reproducible."),
            click.option("--format", "fmt", type=click.Choice(("csv", "text-table")), default="csv", show_default=True),
            click.option("--out", type=click.Path(), default=None, help="Write the table here instead of stdout."),
        ]
    ):
        fn = opt(fn)
    return fn


def _base_payload(opts: dict) -> dict:
    payload = {
        "method": opts["method"],
        "d": opts["d"],
        "lambda": opts["lam"],
        "step": _parse_step(opts["step"]),
        "tol": opts["tol"],
        "max_iter": opts["max_iter"],
        "classifier": opts["classifier"],
        "k": opts["k"],
        "kernel": opts["kernel"],
        "sigma": opts["sigma"],
        "gamma": opts["gamma"],
        "seed": opts["seed"],
        "scale": opts["scale"],
        "timing": opts["timing"],
    }
    if opts["synth_classes"] is not None:
        payload["synthetic"] = {
            "classes": opts["synth_classes"],
            "train_per_class": opts["synth_train_per_class"],
            "test_per_class": opts["synth_test_per_class"],
            "dims": opts["synth_dims"],
            "separation": opts["synth_separation"],
        }
    else:
        payload["train"] = _dataset_payload(opts["train_path"], opts["train_labels_path"], "--train")
        payload["test"] = _dataset_payload(opts["test_path"], opts["test_labels_path"], "--test")
    return payload


@click.group(help="Sparse-PCA recognition benchmark (service client).")
@click.version_option(__version__)
@click.option(
    "--server",
    envvar="PROXPCA_SERVER",
    default=None,
    metavar="URL",
    help="Base URL of a running service; omit to execute in-process.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    ctx.obj = server


@main.command(help="Execute a single benchmark configuration.")
@_data_options
@_model_options
@click.pass_obj
def run(server: str | None, **opts) -> None:
    result = _post(server, "/run", _base_payload(opts))
    _emit([_row_from_json(result["row"])], opts["fmt"], opts["out"])


@main.command(help="Sweep a (method, d) grid and emit one row per cell.")
@_data_options
@_model_options
@click.option("--d-list", default="", metavar="N,N,...", help="Component counts to sweep.")
@click.option("--methods", default="", metavar="M,M,...", help="Reducers to sweep (subset of none,pca,ista-spca,fista-spca).")
@click.option("--parallel", is_flag=True, help="Run grid cells concurrently (timings become non-comparable).")
@click.pass_obj
def grid(server: str | None, d_list: str, methods: str, parallel: bool, **opts) -> None:
    payload = _base_payload(opts)
    try:
        payload["d_list"] = [int(v) for v in d_list.split(",") if v.strip()]
    except ValueError:
        click.echo(f"error (config): --d-list must be comma-separated integers, got {d_list!r}", err=True)
        sys.exit(EXIT_CODES["config"])
    payload["methods"] = [m.strip() for m in methods.split(",") if m.strip()]
    payload["parallel"] = parallel
    result = _post(server, "/grid", payload)
    _emit([_row_from_json(r) for r in result["rows"]], opts["fmt"], opts["out"])


@main.command(help="Generate synthetic CSVs (train and optional test split).")
@click.option("--classes", type=int, default=3, show_default=True)
@click.option("--per-class", type=int, default=8, show_default=True, help="Training samples per class.")
@click.option("--test-per-class", type=int, default=0, show_default=True)
@click.option("--dims", type=int, default=1024, show_default=True)
@click.option("--separation", type=float, default=50.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--train-out", required=True, type=click.Path(), help="Output path for training data CSV.")
@click.option("--train-labels-out", required=True, type=click.Path())
@click.option("--test-out", type=click.Path(), default=None)
@click.option("--test-labels-out", type=click.Path(), default=None)
@click.pass_obj
def synth(
    server: str | None,
    classes: int,
    per_class: int,
    test_per_class: int,
    dims: int,
    separation: float,
    seed: int,
    train_out: str,
    train_labels_out: str,
    test_out: str | None,
    test_labels_out: str | None,
) -> None:
    if test_per_class > 0 and (test_out is None or test_labels_out is None):
        click.echo("error (config): --test-per-class > 0 needs --test-out and --test-labels-out", err=True)
        sys.exit(EXIT_CODES["config"])
    result = _post(
        server,
        "/synth",
        {
            "classes": classes,
            "per_class": per_class,
            "test_per_class": test_per_class,
            "dims": dims,
            "separation": separation,
            "seed": seed,
        },
    )
    _write_text(train_out, result["train_data_csv"])
    _write_text(train_labels_out, result["train_labels_csv"])
    if test_per_class > 0:
        _write_text(test_out, result["test_data_csv"])
        _write_text(test_labels_out, result["test_labels_csv"])


@main.command(help="Run the benchmark service with uvicorn.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
