"""Operator application against closed-form oracles.

Re-exports the public surface of :mod:`experiments.apply.experiment`.
"""

from experiments.apply.experiment import (
    ApplyExperiment,
    OracleEvaluation,
    evaluate_oracle,
    far_field_truncation,
    oracle_pair,
)

__all__ = [
    "ApplyExperiment",
    "OracleEvaluation",
    "evaluate_oracle",
    "far_field_truncation",
    "oracle_pair",
]
