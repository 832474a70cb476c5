"""Command-line entry point: ``hsgfs {run,compare,synth,import}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from hsgfs.bench.experiment import ALGORITHMS, ExperimentSpec, load_dataset, run_experiment, write_report
from hsgfs.bench.report import ComparisonReport, ExternalResultsError, import_external_results, percent
from hsgfs.bench.synthetic import SyntheticSpec, generate_synthetic
from hsgfs.classifier import KnnConfig
from hsgfs.dataset import DatasetError, normalize_split, save_csv, stratified_split
from hsgfs.optimizer import HsgfsConfig
from hsgfs.ranking import rank_features

OUTPUT_DIR_ENV = "HSGFS_OUTPUT_DIR"
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}

log = logging.getLogger("hsgfs")


def parse_seeds(text: str) -> tuple:
    """``"0-4"`` -> (0, 1, 2, 3, 4); ``"1,5,9"`` -> (1, 5, 9); ranges and lists mix."""
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return tuple(seeds)


def parse_algorithms(text: str) -> tuple:
    return tuple(a.strip() for a in str(text).split(",") if a.strip())


def read_config(path) -> dict:
    """Parse a ``key = value`` file; ``#`` starts a comment. Keys use flag names."""
    path = Path(path)
    values = {}
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {line_no}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    if "data" in values and not Path(values["data"]).is_absolute():
        candidate = path.parent / values["data"]
        if candidate.exists():
            values["data"] = str(candidate)
    return values


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _add_synthetic_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("synthetic data (used when --data is absent)")
    g.add_argument("--synth-samples", type=int, default=300)
    g.add_argument("--synth-features", type=int, default=50)
    g.add_argument("--synth-informative", type=int, default=10)
    g.add_argument("--synth-classes", type=int, default=2)
    g.add_argument("--synth-noise", type=float, default=0.0)
    g.add_argument("--synth-separation", type=float, default=1.0)
    g.add_argument("--synth-seed", type=int, default=0)


def _add_experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; explicit flags override it")
    p.add_argument("--data", help="CSV file with a header row")
    p.add_argument("--label-col", default="-1", help="label column name or index (default: last)")
    _add_synthetic_args(p)
    p.add_argument("--classifier", choices=["knn"], default="knn")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--pop", type=int, default=20)
    p.add_argument("--iters", type=int, default=15)
    p.add_argument("--g0", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=20.0)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--vmax", type=float, default=6.0)
    p.add_argument("--memory-cap", type=int, default=None)
    p.add_argument("--no-local-search", dest="local_search", action="store_false")
    p.add_argument("--train-fraction", type=float, default=2 / 3)
    p.add_argument("--ranking-bins", type=int, default=10)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--no-equal-budget", dest="equal_budget", action="store_false",
                   help="run baselines for --iters instead of matching the hybrid's evaluation budget")
    p.add_argument("--output-dir", default="results", help=f"overridden by ${OUTPUT_DIR_ENV}")
    p.add_argument("--name", default=None, help="output file stem")
    p.add_argument("--workers", type=int, default=1, help="parallel (algorithm, seed) cells")


def build_parser(config: Optional[dict] = None) -> argparse.ArgumentParser:
    """``config`` (from a ``--config`` file) becomes the defaults of run/compare."""
    parser = argparse.ArgumentParser(prog="hsgfs", description="Hybrid swarm/gravitation feature selection")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="one algorithm, one seed")
    _add_experiment_args(run)
    run.add_argument("--algo", choices=ALGORITHMS, default="hsgfs")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--dump-ranking", metavar="PATH", help="write the filter ranking for this seed's split")

    compare = sub.add_parser("compare", help="grid of algorithms x seeds")
    _add_experiment_args(compare)
    compare.add_argument("--algos", default=",".join(ALGORITHMS))
    compare.add_argument("--seeds", default="0-9", help="e.g. 0-9 or 1,2,5")

    synth = sub.add_parser("synth", help="write a planted-feature dataset to CSV")
    _add_synthetic_args(synth)
    synth.add_argument("--out", required=True)
    synth.add_argument("--truth", help="also write the informative-column mask as JSON")

    if config:
        run.set_defaults(**config)
        compare.set_defaults(**config)

    imp = sub.add_parser("import", help="merge external results into a report")
    imp.add_argument("--report", required=True, help="report JSON written by run/compare")
    imp.add_argument("--external", required=True, help="CSV with algorithm,seed,accuracy,n_selected")
    imp.add_argument("--include-external", action="store_true",
                     help="let external rows enter the median/IQR aggregates")
    return parser


def _parse(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if not getattr(args, "config", None):
        return args
    values = read_config(args.config)
    unknown = set(values) - set(vars(args)) - {"config"}
    if unknown:
        raise ValueError(f"{args.config}: unknown keys {sorted(unknown)}")
    for key in ("local_search", "equal_budget"):
        if key in values:
            values[key] = _bool(values[key])
    values.pop("config", None)
    return build_parser(values).parse_args(argv)


def synthetic_spec(args) -> SyntheticSpec:
    return SyntheticSpec(args.synth_samples, args.synth_features, args.synth_informative, args.synth_classes,
                         args.synth_noise, args.synth_separation, args.synth_seed)


def experiment_spec(args, algorithms, seeds) -> ExperimentSpec:
    cfg = HsgfsConfig(pop_size=args.pop, max_iter=args.iters, g0=args.g0, alpha=args.alpha,
                      epsilon=args.epsilon, v_max=args.vmax, memory_capacity=args.memory_cap,
                      local_search=args.local_search)
    output_dir = os.environ.get(OUTPUT_DIR_ENV) or args.output_dir
    return ExperimentSpec(
        algorithms=algorithms,
        seeds=seeds,
        data=args.data,
        label_col=str(args.label_col),
        synthetic=None if args.data else synthetic_spec(args),
        knn=KnnConfig(args.k),
        hsgfs=cfg,
        train_fraction=args.train_fraction,
        ranking_bins=args.ranking_bins,
        master_seed=args.master_seed,
        equal_budget=args.equal_budget,
        output_dir=output_dir,
        name=args.name or ("run" if args.command == "run" else "report"),
    )


def _print_summary(report: ComparisonReport) -> None:
    for alg, a in report.aggregates().items():
        print(f"{alg:>8}  runs={a['runs']:<3d} median acc={percent(a['median_accuracy'])} "
              f"(IQR {percent(a['iqr_accuracy'])})  median features={a['median_n_selected']:g} "
              f"({100 * a['median_fraction_used']:.2f}% of {report.n_features})")


def cmd_run(args) -> None:
    spec = experiment_spec(args, (args.algo,), (args.seed,))
    if args.dump_ranking:
        from hsgfs.bench.experiment import child_seed
        dataset = load_dataset(spec)
        split = normalize_split(stratified_split(dataset, spec.train_fraction,
                                                 child_seed(spec.master_seed, "split", args.seed)))
        rank_features(split.train, spec.ranking_bins).to_csv(args.dump_ranking)
    report = run_experiment(spec)
    paths = write_report(report, spec)
    row = report.rows[0]
    print(f"{row['algorithm']} seed={row['seed']}: accuracy {percent(row['accuracy'])} with "
          f"{row['n_selected']}/{report.n_features} features, {row['evaluations']} evaluations, "
          f"{row['wall_time']:.2f}s")
    print(f"wrote {paths['json']}")


def cmd_compare(args) -> None:
    spec = experiment_spec(args, parse_algorithms(args.algos), parse_seeds(args.seeds))
    report = run_experiment(spec, workers=args.workers)
    paths = write_report(report, spec)
    _print_summary(report)
    print(f"wrote {paths['json']}, {paths['runs']}, {paths['summary']}")


def cmd_synth(args) -> None:
    dataset, truth = generate_synthetic(synthetic_spec(args))
    save_csv(dataset, args.out)
    informative = [int(i) for i in truth.nonzero()[0]]
    if args.truth:
        Path(args.truth).write_text(json.dumps({"informative": informative, "n_features": dataset.n_features}) + "\n")
    print(f"wrote {args.out}: {dataset.n_samples} samples, {dataset.n_features} features, "
          f"informative columns {informative}")


def cmd_import(args) -> None:
    report_path = Path(args.report)
    report = ComparisonReport.load(report_path)
    report.merge_external(import_external_results(args.external))
    report.include_external = report.include_external or args.include_external
    stem = report_path.name[:-5] if report_path.name.endswith(".json") else report_path.stem
    out_dir = os.environ.get(OUTPUT_DIR_ENV) or report_path.parent
    report.write(out_dir, stem)
    _print_summary(report)


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "synth": cmd_synth, "import": cmd_import}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parse(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                            format="%(levelname)s %(name)s: %(message)s")
        COMMANDS[args.command](args)
    except (DatasetError, ExternalResultsError, ValueError, OSError, RuntimeError) as exc:
        print(f"hsgfs: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
