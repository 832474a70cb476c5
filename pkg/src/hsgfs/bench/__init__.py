from hsgfs.bench.experiment import ExperimentSpec, child_seed, run_experiment
from hsgfs.bench.report import ComparisonReport, import_external_results
from hsgfs.bench.synthetic import SyntheticSpec, generate_synthetic

__all__ = ["ComparisonReport", "ExperimentSpec", "SyntheticSpec", "child_seed", "generate_synthetic",
           "import_external_results", "run_experiment"]
