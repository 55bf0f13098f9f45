"""Experiment runner, configuration files, CSV input/output and the CLI."""

from .config import ExperimentConfig, TestEntry, load_config, parse_config
from .csvio import RESULT_HEADER, load_csv, load_csv_pair, write_rows
from .runner import PowerRow, run_power_curve, run_replication, run_type1, wald_interval
