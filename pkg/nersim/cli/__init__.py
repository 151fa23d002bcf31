"""
Command line interface and the config-driven experiment runner.
"""

from .runner import ExperimentRunner, RunOutcome, run

__all__ = ["ExperimentRunner", "RunOutcome", "run"]
