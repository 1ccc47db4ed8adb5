"""Data storage and persistence layer.

Provides YAML configuration persistence and CSV table output.
"""
