"""Manufactured Dirichlet problems and the supersolution sweep.

Re-exports the public surface of :mod:`experiments.dirichlet.experiment`.
"""

from experiments.dirichlet.experiment import (
    DirichletExperiment,
    DirichletRun,
    manufactured,
    solve_manufactured,
    supersolution_sweep,
)

__all__ = [
    "DirichletExperiment",
    "DirichletRun",
    "manufactured",
    "solve_manufactured",
    "supersolution_sweep",
]
