"""Numerical core and runtime plumbing.

Provides the weight generators, the discrete operator, the Dirichlet
solver, the time steppers and their oracles, plus the command registry
and sweep runner the CLI is built on.
"""
