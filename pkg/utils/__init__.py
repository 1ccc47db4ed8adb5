"""Utility functions and helpers.

Provides quadrature panels, convergence-rate fitting and snapshot scheduling.
"""
