"""Weight and symbol tables.

Re-exports the public surface of :mod:`experiments.tables.experiment`.
"""

from experiments.tables.experiment import TablesExperiment, symbol_table, weight_table

__all__ = ["TablesExperiment", "symbol_table", "weight_table"]
