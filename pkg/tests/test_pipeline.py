import numpy as np
import pytest

from proxpca.datamat import format_csv, format_labels, generate_synthetic
from proxpca.errors import InvalidInputError, ProxpcaError
from proxpca.pipeline import (
    CSV_HEADER,
    BenchmarkRow,
    RunConfig,
    SyntheticSpec,
    emit_table,
    render_table,
    run_grid,
    run_pipeline,
)


def synth_config(**overrides):
    base = dict(
        method="pca",
        d=10,
        classifier="nn",
        seed=1,
        timing=False,
        synthetic=SyntheticSpec(classes=3, train_per_class=8, test_per_class=4, dims=1024, separation=50.0),
    )
    base.update(overrides)
    return RunConfig(**base)


def small_config(**overrides):
    base = dict(
        method="pca",
        d=4,
        classifier="nn",
        seed=2,
        timing=False,
        synthetic=SyntheticSpec(classes=3, train_per_class=6, test_per_class=3, dims=24, separation=20.0),
    )
    base.update(overrides)
    return RunConfig(**base)


class TestRunPipeline:
    def test_separable_synthetic_pca_nn_is_perfect(self):
        row = run_pipeline(synth_config())
        assert row.q_accuracy == 1.0
        assert row.plain_accuracy == 1.0
        assert row.method == "pca"
        assert row.d == 10
        assert row.converged

    def test_baseline_self_classification(self):
        data, labels = generate_synthetic(3, 4, 8, 5.0, seed=3)
        text, ltext = format_csv(data), format_labels(labels)
        config = RunConfig(
            method="none",
            classifier="nn",
            timing=False,
            train_data_text=text,
            train_labels_text=ltext,
            test_data_text=text,
            test_labels_text=ltext,
        )
        row = run_pipeline(config)
        assert row.plain_accuracy == 1.0
        assert row.d is None and row.lam is None

    def test_config_validation_before_any_work(self):
        config = small_config(method="ista-spca", lam=0.1, max_iter=0)
        with pytest.raises(InvalidInputError, match=r"\[config\]"):
            run_pipeline(config)

    def test_sparse_method_requires_lambda(self):
        with pytest.raises(InvalidInputError, match="lambda"):
            run_pipeline(small_config(method="fista-spca", lam=None))

    def test_missing_data_source(self):
        with pytest.raises(InvalidInputError, match="data source"):
            run_pipeline(RunConfig(method="none"))

    def test_load_errors_are_staged(self):
        config = RunConfig(
            method="none",
            train_data_text="1,2\n3\n",
            train_labels_text="0\n1\n",
            test_data_text="1,2\n",
            test_labels_text="0\n",
        )
        with pytest.raises(ProxpcaError, match=r"\[load\]"):
            run_pipeline(config)

    def test_sparse_fit_records_iterations(self):
        row = run_pipeline(small_config(method="ista-spca", d=3, lam=0.05, max_iter=4000))
        assert row.iterations > 0
        assert row.lam == 0.05
        assert row.q_accuracy == 1.0

    def test_scale_flag_preserves_nn_results(self):
        plain = run_pipeline(small_config())
        scaled = run_pipeline(small_config(scale=True))
        assert plain.q_accuracy == scaled.q_accuracy

    def test_timing_flag_zeroes_seconds(self):
        row = run_pipeline(synth_config(timing=False))
        assert row.fit_seconds == 0.0
        row = run_pipeline(synth_config(timing=True))
        assert row.fit_seconds > 0.0

    def test_krr_path(self):
        row = run_pipeline(small_config(classifier="krr", gamma=0.1))
        assert row.q_accuracy == 1.0


class TestRunGrid:
    def test_method_outer_d_inner_order(self):
        rows = run_grid(small_config(lam=0.05, max_iter=3000), [2, 3], ["pca", "ista-spca"])
        labels = [(r.method, r.d) for r in rows]
        assert labels == [("pca", 2), ("pca", 3), ("ista-spca", 2), ("ista-spca", 3)]

    def test_baseline_contributes_single_row(self):
        rows = run_grid(small_config(), [2, 3, 4], ["none"])
        assert len(rows) == 1
        assert rows[0].method == "none"
        assert rows[0].d is None

    def test_pca_rows_identical_above_rank(self):
        # 18 train rows -> rank <= 17; both d values exceed it
        rows = run_grid(small_config(), [18, 22], ["pca"])
        assert rows[0].q_accuracy == rows[1].q_accuracy
        assert rows[0].plain_accuracy == rows[1].plain_accuracy

    def test_failing_cell_becomes_error_row(self):
        rows = run_grid(small_config(lam=None), [2], ["pca", "ista-spca"])
        assert rows[0].error is None
        assert rows[1].error is not None
        assert rows[1].q_accuracy is None
        assert not rows[1].converged

    def test_empty_lists_rejected(self):
        with pytest.raises(InvalidInputError):
            run_grid(small_config(), [], ["pca"])
        with pytest.raises(InvalidInputError):
            run_grid(small_config(), [2], [])

    def test_unknown_method_rejected(self):
        with pytest.raises(InvalidInputError):
            run_grid(small_config(), [2], ["pca", "umap"])

    def test_parallel_matches_sequential_and_marks_rows(self):
        base = small_config(lam=0.05, max_iter=3000)
        seq = run_grid(base, [2, 3], ["pca", "ista-spca"])
        par = run_grid(base, [2, 3], ["pca", "ista-spca"], parallel=True)
        assert all(r.parallel_timing for r in par)
        assert [(r.method, r.d, r.q_accuracy, r.iterations) for r in seq] == [
            (r.method, r.d, r.q_accuracy, r.iterations) for r in par
        ]


class TestEmitTable:
    def rows(self):
        return [
            BenchmarkRow("pca", 200, None, 647 / 675, 31 / 45, 8.094, 0, True),
            BenchmarkRow("ista-spca", 300, 0.5, 615 / 675, 15 / 45, 2232.0, 51234, False),
        ]

    def test_csv_shape_and_header(self):
        text = emit_table(self.rows()[:1], "csv")
        lines = text.strip().split("\n")
        assert len(lines) == 2
        assert lines[0] == CSV_HEADER
        assert lines[1] == "pca,200,,95.85,68.89,8.09,0,true"

    def test_round_half_up_percent(self):
        row = BenchmarkRow("pca", 200, None, 0.95852, 0.95852, 0.0, 0, True)
        text = emit_table([row], "csv")
        assert ",95.85,95.85," in text

    def test_byte_stable(self):
        a = emit_table(self.rows(), "csv")
        b = emit_table(self.rows(), "csv")
        assert a == b
        ta = emit_table(self.rows(), "text-table")
        tb = emit_table(self.rows(), "text-table")
        assert ta == tb

    def test_text_table_alignment(self):
        text = render_table(self.rows(), "text-table")
        lines = text.strip().split("\n")
        assert lines[0].startswith("method")
        assert set(lines[1]) <= {"-", " "}
        assert "95.85" in lines[2]

    def test_error_row_renders_blank_metrics_and_note(self):
        rows = [BenchmarkRow("ista-spca", 2, 0.1, None, None, None, 0, False, error="boom")]
        csv_text = render_table(rows, "csv")
        assert "ista-spca,2,0.1,,,,0,false" in csv_text
        table = render_table(rows, "text-table")
        assert "note: ista-spca d=2: boom" in table

    def test_writes_file(self, tmp_path):
        path = tmp_path / "out.csv"
        text = emit_table(self.rows(), "csv", path)
        assert path.read_text() == text

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError):
            emit_table(self.rows(), "csv", tmp_path / "nope" / "out.csv")

    def test_empty_rows_rejected(self):
        with pytest.raises(InvalidInputError):
            emit_table([], "csv")

    def test_unknown_format_rejected(self):
        with pytest.raises(InvalidInputError):
            emit_table(self.rows(), "yaml")


class TestDeterminism:
    def test_identical_config_gives_identical_tables(self):
        config = small_config(method="fista-spca", d=3, lam=0.1, max_iter=4000)
        a = emit_table([run_pipeline(config)], "csv")
        b = emit_table([run_pipeline(config)], "csv")
        assert a == b

    def test_baseline_rows_invariant_to_d(self):
        rows_a = run_grid(small_config(method="none"), [2], ["none"])
        rows_b = run_grid(small_config(method="none"), [7, 9], ["none"])
        assert render_table(rows_a, "csv") == render_table(rows_b, "csv")
