"""Convergence studies.

Re-exports the public surface of :mod:`experiments.converge.experiment`.
"""

from experiments.converge.experiment import (
    ConvergeExperiment,
    error_function,
    parse_h_list,
    run_convergence,
)

__all__ = ["ConvergeExperiment", "error_function", "parse_h_list", "run_convergence"]
