from pathlib import Path

from click.testing import CliRunner

from proxpca.cli import main
from proxpca.pipeline import CSV_HEADER


def invoke(*args, **kwargs):
    return CliRunner().invoke(main, list(args), catch_exceptions=False, **kwargs)


def make_dataset(tmp_path: Path, seed=5):
    tmp_path.mkdir(parents=True, exist_ok=True)
    paths = {}
    result = invoke(
        "synth",
        "--classes", "3",
        "--per-class", "6",
        "--test-per-class", "3",
        "--dims", "16",
        "--separation", "12",
        "--seed", str(seed),
        "--train-out", str(tmp_path / "train.csv"),
        "--train-labels-out", str(tmp_path / "train.labels"),
        "--test-out", str(tmp_path / "test.csv"),
        "--test-labels-out", str(tmp_path / "test.labels"),
    )
    assert result.exit_code == 0, result.output
    for name in ("train.csv", "train.labels", "test.csv", "test.labels"):
        paths[name] = str(tmp_path / name)
        assert (tmp_path / name).exists()
    return paths


def data_args(paths):
    return [
        "--train", paths["train.csv"],
        "--train-labels", paths["train.labels"],
        "--test", paths["test.csv"],
        "--test-labels", paths["test.labels"],
    ]


class TestSynthCommand:
    def test_writes_files_deterministically(self, tmp_path):
        a = make_dataset(tmp_path / "a", seed=9)
        b = make_dataset(tmp_path / "b", seed=9)
        for name in ("train.csv", "train.labels", "test.csv", "test.labels"):
            assert Path(a[name]).read_bytes() == Path(b[name]).read_bytes()

    def test_test_split_needs_paths(self, tmp_path):
        result = CliRunner().invoke(
            main,
            [
                "synth", "--test-per-class", "2",
                "--train-out", str(tmp_path / "t.csv"),
                "--train-labels-out", str(tmp_path / "t.labels"),
            ],
        )
        assert result.exit_code == 2


class TestRunCommand:
    def test_run_on_files_prints_csv(self, tmp_path):
        paths = make_dataset(tmp_path)
        result = invoke(
            "run", *data_args(paths), "--method", "pca", "--d", "3", "--no-timing"
        )
        assert result.exit_code == 0, result.output
        lines = result.output.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert lines[1].startswith("pca,3,,100.00,100.00,0.00,")

    def test_out_writes_file(self, tmp_path):
        paths = make_dataset(tmp_path)
        out = tmp_path / "row.csv"
        result = invoke(
            "run", *data_args(paths), "--method", "none", "--no-timing", "--out", str(out)
        )
        assert result.exit_code == 0
        assert out.read_text().startswith(CSV_HEADER)

    def test_synthetic_source(self):
        result = invoke(
            "run",
            "--synth-classes", "3",
            "--synth-dims", "32",
            "--method", "fista-spca",
            "--d", "2",
            "--lambda", "0.1",
            "--max-iter", "3000",
            "--classifier", "krr",
            "--kernel", "linear",
            "--gamma", "0.1",
            "--no-timing",
        )
        assert result.exit_code == 0, result.output
        assert "fista-spca,2,0.1,100.00" in result.output

    def test_reproducible_output_without_timing(self, tmp_path):
        paths = make_dataset(tmp_path)
        args = ["run", *data_args(paths), "--method", "ista-spca", "--d", "2",
                "--lambda", "0.05", "--max-iter", "3000", "--seed", "7", "--no-timing"]
        assert invoke(*args).output == invoke(*args).output

    def test_config_error_exit_code(self):
        result = CliRunner().invoke(
            main,
            ["run", "--synth-classes", "2", "--synth-dims", "8", "--method", "ista-spca",
             "--d", "1", "--lambda", "0.1", "--max-iter", "0"],
        )
        assert result.exit_code == 2
        assert "config" in result.output

    def test_missing_file_exit_code(self, tmp_path):
        result = CliRunner().invoke(
            main,
            ["run", "--train", str(tmp_path / "nope.csv"), "--train-labels", str(tmp_path / "nope.labels"),
             "--test", str(tmp_path / "nope.csv"), "--test-labels", str(tmp_path / "nope.labels")],
        )
        assert result.exit_code == 3

    def test_numeric_failure_exit_code(self):
        result = CliRunner().invoke(
            main,
            ["run", "--synth-classes", "2", "--synth-dims", "16", "--synth-separation", "50",
             "--method", "ista-spca", "--d", "1", "--lambda", "0", "--step", "1e308",
             "--max-iter", "10"],
        )
        assert result.exit_code == 4
        assert "numeric" in result.output

    def test_no_data_source_exit_code(self):
        result = CliRunner().invoke(main, ["run", "--method", "none"])
        assert result.exit_code == 2

    def test_bad_step_value(self):
        result = CliRunner().invoke(main, ["run", "--synth-classes", "2", "--step", "fast"])
        assert result.exit_code == 2


class TestGridCommand:
    def test_grid_text_table(self, tmp_path):
        paths = make_dataset(tmp_path)
        result = invoke(
            "grid", *data_args(paths),
            "--methods", "none,pca",
            "--d-list", "2,3",
            "--format", "text-table",
            "--no-timing",
        )
        assert result.exit_code == 0, result.output
        lines = result.output.strip().split("\n")
        assert lines[0].split() == CSV_HEADER.split(",")
        assert len(lines) == 5  # header, rule, none row, two pca rows

    def test_grid_empty_d_list_rejected(self, tmp_path):
        paths = make_dataset(tmp_path)
        result = CliRunner().invoke(
            main, ["grid", *data_args(paths), "--methods", "pca", "--d-list", ""]
        )
        assert result.exit_code == 2

    def test_grid_parallel_flag(self, tmp_path):
        paths = make_dataset(tmp_path)
        result = invoke(
            "grid", *data_args(paths), "--methods", "pca", "--d-list", "2,3",
            "--parallel", "--format", "text-table", "--no-timing",
        )
        assert result.exit_code == 0
        assert "parallel" in result.output  # footnote marks parallel timings

    def test_grid_bad_d_list(self, tmp_path):
        paths = make_dataset(tmp_path)
        result = CliRunner().invoke(
            main, ["grid", *data_args(paths), "--methods", "pca", "--d-list", "2,x"]
        )
        assert result.exit_code == 2
