"""Experiment configs, table suites, rendering and the command-line entry point."""
from .config import ExperimentConfig, load_config
from .experiments import ErrorReport, SuiteResult, run_experiment, run_suite, suite_config, trend_holds

__all__ = [
    "ErrorReport",
    "ExperimentConfig",
    "SuiteResult",
    "load_config",
    "run_experiment",
    "run_suite",
    "suite_config",
    "trend_holds",
]
