"""Experiment command groups.

Each subpackage registers one or more CLI subcommands on the shared
:class:`core.commands.CommandRegistry`.
"""
