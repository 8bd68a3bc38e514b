"""Experiment harness: random generators, a greedy baseline, and runners."""

from .experiments import EXPERIMENTS, ExperimentConfig, Report, run_experiment
from .greedy import greedy_wachter

__all__ = ["EXPERIMENTS", "ExperimentConfig", "Report", "greedy_wachter", "run_experiment"]
