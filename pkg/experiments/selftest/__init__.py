"""Identity and inequality suite.

Re-exports the public surface of :mod:`experiments.selftest.experiment`.
"""

from experiments.selftest.experiment import (
    IdentityResult,
    SelftestExperiment,
    check_family,
    cordoba_margin,
    energy_gap,
    parseval_gap,
    random_field,
    run_suite,
    self_adjoint_gap,
    stroock_varopoulos_margin,
)

__all__ = [
    "IdentityResult",
    "SelftestExperiment",
    "check_family",
    "cordoba_margin",
    "energy_gap",
    "parseval_gap",
    "random_field",
    "run_suite",
    "self_adjoint_gap",
    "stroock_varopoulos_margin",
]
