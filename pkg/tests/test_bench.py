import csv
import json
import statistics

import numpy as np
import pytest

from hsgfs.bench import ComparisonReport, ExperimentSpec, SyntheticSpec, child_seed, generate_synthetic, run_experiment
from hsgfs.bench.cli import main, parse_seeds, read_config
from hsgfs.bench.report import ExternalResultsError, import_external_results
from hsgfs.classifier import KnnConfig, wrapper_fitness
from hsgfs.dataset import DatasetError, load_csv, normalize_split, stratified_split
from hsgfs.optimizer import HsgfsConfig

SMALL = SyntheticSpec(n_samples=90, n_features=24, n_informative=4, seed=2)
FAST = HsgfsConfig(pop_size=6, max_iter=3)


def test_synthetic_truth_mask():
    d, truth = generate_synthetic(SyntheticSpec(n_features=50, n_informative=10))
    assert truth.sum() == 10 and d.n_features == 50 and d.n_samples == 300


def test_synthetic_deterministic():
    a, ta = generate_synthetic(SMALL)
    b, tb = generate_synthetic(SMALL)
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.y, b.y)
    np.testing.assert_array_equal(ta, tb)


@pytest.mark.parametrize("kwargs", [dict(n_informative=0), dict(n_informative=60), dict(class_count=1),
                                    dict(noise_rate=1.0), dict(n_samples=3)])
def test_synthetic_rejects_inconsistent_spec(kwargs):
    with pytest.raises(DatasetError):
        SyntheticSpec(**kwargs)


def test_informative_beats_noise_masks():
    spec = SyntheticSpec(n_samples=200, n_features=30, n_informative=5, noise_rate=0.0, separation=3.0, seed=4)
    d, truth = generate_synthetic(spec)
    split = normalize_split(stratified_split(d, 0.5, 0))
    informative = wrapper_fitness(truth, split, KnnConfig(1)).accuracy
    noise_cols = np.flatnonzero(~truth)
    rng = np.random.default_rng(0)
    for _ in range(20):
        mask = np.zeros(30, bool)
        mask[rng.choice(noise_cols, 5, replace=False)] = True
        assert informative > wrapper_fitness(mask, split, KnnConfig(1)).accuracy


def test_noise_rate_flips_labels():
    clean, _ = generate_synthetic(SyntheticSpec(n_samples=2000, noise_rate=0.0, seed=1))
    noisy, _ = generate_synthetic(SyntheticSpec(n_samples=2000, noise_rate=0.2, seed=1))
    assert abs((clean.y != noisy.y).mean() - 0.2) < 0.03


def test_child_seeds_independent_of_algorithm_set():
    assert child_seed(0, "bpso", 3) == child_seed(0, "bpso", 3)
    assert len({child_seed(0, s, 3) for s in ("split", "hsgfs", "bpso", "bgsa")}) == 4
    one = run_experiment(ExperimentSpec(("bpso",), (0, 1), synthetic=SMALL, hsgfs=FAST))
    two = run_experiment(ExperimentSpec(("hsgfs", "bpso"), (0, 1), synthetic=SMALL, hsgfs=FAST))
    strip = lambda rows: [(r["seed"], r["run_seed"], r["accuracy"], r["best_position"]) for r in rows]
    assert strip(one.rows) == strip([r for r in two.rows if r["algorithm"] == "bpso"])


def test_single_cell_report():
    report = run_experiment(ExperimentSpec(("hsgfs",), (7,), synthetic=SMALL, hsgfs=FAST))
    assert len(report.rows) == 1
    row = report.rows[0]
    assert row["fraction_used"] == row["n_selected"] / 24
    assert len(row["convergence"]) == FAST.max_iter + 1


def test_experiment_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec((), (0,), synthetic=SMALL)
    with pytest.raises(ValueError):
        ExperimentSpec(("ga",), (0,), synthetic=SMALL)
    with pytest.raises(ValueError):
        ExperimentSpec(("hsgfs",), (), synthetic=SMALL)
    with pytest.raises(ValueError):
        ExperimentSpec(("hsgfs",), (0,))


def test_cell_errors_carry_context(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("a,y\n1,A\n2,B\n3,A\n4,B\n")
    spec = ExperimentSpec(("bpso",), (0,), data=str(path), label_col="y", knn=KnnConfig(5))
    with pytest.raises(RuntimeError, match=r"bpso \(seed 0\)"):
        run_experiment(spec)


@pytest.fixture(scope="module")
def grid_report():
    spec = ExperimentSpec(("hsgfs", "bpso", "bgsa"), tuple(range(5)), synthetic=SMALL, hsgfs=FAST)
    return run_experiment(spec)


def test_medians_match_independent_computation(grid_report, tmp_path):
    paths = grid_report.write(tmp_path, "g")
    data = json.loads(paths["json"].read_text())
    for alg in ("hsgfs", "bpso", "bgsa"):
        accs = [r["accuracy"] for r in data["rows"] if r["algorithm"] == alg]
        nsel = [r["n_selected"] for r in data["rows"] if r["algorithm"] == alg]
        assert len(accs) == 5
        assert data["aggregates"][alg]["median_accuracy"] == statistics.median(accs)
        assert data["aggregates"][alg]["median_n_selected"] == statistics.median(nsel)
        q = statistics.quantiles(accs, n=4, method="inclusive")
        assert data["aggregates"][alg]["iqr_accuracy"] == pytest.approx(q[2] - q[0], abs=1e-12)


def test_json_and_csv_agree(grid_report, tmp_path):
    paths = grid_report.write(tmp_path, "g")
    data = json.loads(paths["json"].read_text())
    with paths["runs"].open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(data["rows"])
    for c, j in zip(rows, data["rows"]):
        assert (c["algorithm"], int(c["seed"]), int(c["n_selected"])) == (j["algorithm"], j["seed"], j["n_selected"])
        assert c["accuracy"] == f"{100 * j['accuracy']:.2f}%"
        assert float(c["fraction_used"]) == pytest.approx(j["n_selected"] / data["n_features"], abs=5e-5)


def test_report_rebuilt_from_json(grid_report, tmp_path):
    paths = grid_report.write(tmp_path, "g")
    rebuilt = ComparisonReport.load(paths["json"])
    assert rebuilt.runs_csv() == paths["runs"].read_text()
    assert rebuilt.summary_csv() == paths["summary"].read_text()


def write_external(tmp_path, body):
    p = tmp_path / "ext.csv"
    p.write_text("algorithm,seed,accuracy,n_selected\n" + body)
    return p


def test_import_rows(tmp_path):
    rows = import_external_results(write_external(tmp_path, "ga,0,0.91,12\nsa,0,88.5%,10\n"))
    assert [r["algorithm"] for r in rows] == ["ga", "sa"]
    assert rows[1]["accuracy"] == pytest.approx(0.885)


@pytest.mark.parametrize("body, line", [("ga,0,abc,12\n", 2), ("ga,0,0.9,3\nhs,x,0.8,2\n", 3),
                                        ("ga,0,1.7,3\n", 2), (",0,0.5,3\n", 2)])
def test_import_errors_name_line(tmp_path, body, line):
    with pytest.raises(ExternalResultsError, match=f"line {line}"):
        import_external_results(write_external(tmp_path, body))


def test_import_missing_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("algorithm,seed,accuracy\nga,0,0.9\n")
    with pytest.raises(ExternalResultsError, match="n_selected"):
        import_external_results(p)


def test_external_rows_only_aggregate_when_included(grid_report, tmp_path):
    report = ComparisonReport.from_json(json.loads(json.dumps(grid_report.to_json())))
    report.merge_external(import_external_results(write_external(tmp_path, "ga,0,0.5,12\nga,1,0.6,10\n")))
    assert "ga" not in report.aggregates()
    assert report.aggregates(include_external=True)["ga"]["runs"] == 2
    assert "external" in report.runs_csv()
    report.include_external = True
    assert "ga," in report.summary_csv()


def test_parse_seeds():
    assert parse_seeds("0-3") == (0, 1, 2, 3)
    assert parse_seeds("1,5, 9") == (1, 5, 9)
    assert parse_seeds("0-1,7") == (0, 1, 7)


def test_read_config(tmp_path):
    p = tmp_path / "spec.cfg"
    p.write_text("# comment\npop = 8\nno-such = 1\n\nseeds=0-2  # trailing\n")
    assert read_config(p) == {"pop": "8", "no_such": "1", "seeds": "0-2"}


# -- CLI ---------------------------------------------------------------

def test_cli_synth_and_run(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["synth", "--synth-samples", "80", "--synth-features", "25", "--synth-informative", "3",
                 "--out", str(out), "--truth", str(tmp_path / "t.json")]) == 0
    d = load_csv(out, "label")
    assert (d.n_samples, d.n_features) == (80, 25)
    assert len(json.loads((tmp_path / "t.json").read_text())["informative"]) == 3

    rank_path = tmp_path / "rank.csv"
    assert main(["run", "--data", str(out), "--label-col", "label", "--algo", "hsgfs", "--pop", "6",
                 "--iters", "2", "--output-dir", str(tmp_path / "o"), "--dump-ranking", str(rank_path)]) == 0
    assert "hsgfs seed=0" in capsys.readouterr().out
    assert len(rank_path.read_text().splitlines()) == 26
    assert (tmp_path / "o" / "run.json").exists()


def test_cli_config_file_and_env_override(tmp_path, monkeypatch):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("algos = bpso\nseeds = 0-1\npop = 5\niters = 2\nsynth_samples = 60\nsynth_features = 12\n"
                   "synth_informative = 3\nlocal_search = false\nname = exp\n")
    monkeypatch.setenv("HSGFS_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["compare", "--config", str(cfg), "--output-dir", str(tmp_path / "ignored")]) == 0
    data = json.loads((tmp_path / "env" / "exp.json").read_text())
    assert data["settings"]["hsgfs"]["pop_size"] == 5
    assert data["settings"]["hsgfs"]["local_search"] is False
    assert len(data["rows"]) == 2
    # explicit flags beat the file
    assert main(["compare", "--config", str(cfg), "--seeds", "3"]) == 0
    assert [r["seed"] for r in json.loads((tmp_path / "env" / "exp.json").read_text())["rows"]] == [3]


def test_cli_import(tmp_path):
    out = tmp_path / "o"
    assert main(["compare", "--algos", "hsgfs", "--seeds", "0", "--pop", "4", "--iters", "1",
                 "--synth-samples", "60", "--synth-features", "20", "--output-dir", str(out)]) == 0
    ext = write_external(tmp_path, "ga,0,0.5,4\n")
    assert main(["import", "--report", str(out / "report.json"), "--external", str(ext),
                 "--include-external"]) == 0
    summary = (out / "report_summary.csv").read_text()
    assert summary.splitlines()[-1].startswith("ga,1,50.00%")
    assert (out / "report_runs.csv").read_text().strip().endswith("external")


@pytest.mark.parametrize("argv", [
    ["run", "--data", "/nonexistent.csv"],
    ["compare", "--algos", "ga", "--seeds", "0"],
    ["compare", "--config", "/nonexistent.cfg"],
])
def test_cli_errors_exit_nonzero(argv, capsys):
    assert main(argv) != 0
    assert "error" in capsys.readouterr().err


def test_cli_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("popsize = 3\n")
    assert main(["compare", "--config", str(cfg)]) == 1
    assert "unknown keys" in capsys.readouterr().err
