"""Heat, Burgers and thin-film runs.

Re-exports the public surface of :mod:`experiments.pde.experiment`.
"""

from experiments.pde.experiment import (
    PdeExperiment,
    build_config,
    default_dt,
    exterior_for,
    initial_field,
    parse_snapshots,
    snapshot_rows,
)

__all__ = [
    "PdeExperiment",
    "build_config",
    "default_dt",
    "exterior_for",
    "initial_field",
    "parse_snapshots",
    "snapshot_rows",
]
