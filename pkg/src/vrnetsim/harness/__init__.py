"""Configuration, seeded runs, sweeps, persistence and the CLI."""

from vrnetsim.harness.config import ExperimentConfig, dump_config, load_config, parse_config
from vrnetsim.harness.experiment import ALGORITHMS, PeriodRecord, RunRecord, run_experiment
from vrnetsim.harness.io import cdf_at, compute_cdf, emit, read_json
from vrnetsim.harness.sweep import SweepPoint, sweep

__all__ = [
    "ALGORITHMS", "ExperimentConfig", "PeriodRecord", "RunRecord", "SweepPoint", "cdf_at",
    "compute_cdf", "dump_config", "emit", "load_config", "parse_config", "read_json",
    "run_experiment", "sweep",
]
