"""Main entry point for the fraclap experiment CLI."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Callable, Sequence
from datetime import UTC, datetime
from typing import Any

import trio

from config import ConfigManager
from core.commands import Command, CommandContext, CommandRegistry
from core.context import RunContext
from core.errors import ConfigError, FracLapError
from experiments.apply import ApplyExperiment
from experiments.converge import ConvergeExperiment
from experiments.dirichlet import DirichletExperiment
from experiments.pde import PdeExperiment
from experiments.selftest import SelftestExperiment
from experiments.tables import TablesExperiment
from storage.file_store import dump_yaml

logger = logging.getLogger(__name__)

CONFIG_ENV = "FRACLAP_CONFIG"
DEFAULT_CONFIG_PATH = "fraclap.yaml"

# Common flag -> (config section, key, converter). Flags left unset never
# override the file.
_FLAG_PATHS: dict[str, tuple[str, str, Callable[[Any], Any]]] = {
    "family": ("weights", "family", str),
    "alpha": ("weights", "alpha", float),
    "m": ("weights", "m", int),
    "h": ("grid", "h", float),
    "L": ("grid", "L", float),
    "far_field": ("far_field", "enabled", bool),
    "beta": ("far_field", "beta", float),
    "LM": ("far_field", "L_M", float),
    "dt": ("evolve", "dt", float),
    "tfinal": ("evolve", "t_final", float),
    "kappa": ("evolve", "kappa", float),
    "lam": ("evolve", "lambda", float),
    "flux": ("evolve", "flux", str),
    "snapshots": ("evolve", "snapshots", str),
    "oracle": ("apply", "oracle", str),
    "seed": ("selftest", "seed", int),
    "workers": ("converge", "workers", int),
    "out": ("output", "path", str),
    "log_level": ("logging", "level", str),
}


def _configure_logging(settings: dict[str, Any]) -> None:
    level_name = (settings.get("logging", {}) or {}).get("level", "INFO") or "INFO"
    level = getattr(logging, str(level_name).upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )


def common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; all default to ``None`` (= take the config value)."""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=None, help=f"YAML config file (default ${CONFIG_ENV} or {DEFAULT_CONFIG_PATH})")
    p.add_argument("--family", default=None, help="weight family: SP, PER, GL, T or Q")
    p.add_argument("--alpha", type=float, default=None, help="fractional order in (0, 2]")
    p.add_argument("--h", type=float, default=None, help="grid spacing")
    p.add_argument("--m", type=int, default=None, help="weight truncation length")
    p.add_argument("--L", type=float, default=None, help="window half-width")
    p.add_argument("--LM", type=float, default=None, help="far-field extension radius")
    p.add_argument("--beta", type=float, default=None, help="far-field decay exponent")
    p.add_argument("--far-field", dest="far_field", action="store_true", default=None, help="use the algebraic exterior")
    p.add_argument("--dt", type=float, default=None, help="time step")
    p.add_argument("--tfinal", type=float, default=None, help="final time")
    p.add_argument("--kappa", type=float, default=None, help="Burgers diffusion coefficient")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="thin-film drift")
    p.add_argument("--flux", default=None, choices=("godunov", "lax-friedrichs"), help="Burgers numerical flux")
    p.add_argument("--snapshots", default=None, help="comma-separated snapshot times")
    p.add_argument("--oracle", default=None, help="gaussian0, lorentzian or beta_bump:k")
    p.add_argument("--out", default=None, help="output CSV path, '-' for stdout")
    p.add_argument("--seed", type=int, default=None, help="random seed for the identity suite")
    p.add_argument("--workers", type=int, default=None, help="concurrent sweep jobs")
    p.add_argument("--log-level", dest="log_level", default=None, help="DEBUG, INFO, WARNING, ...")
    return p


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for dest, (sect, key, convert) in _FLAG_PATHS.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if dest == "snapshots":
            try:
                value = [float(v) for v in value.split(",") if v.strip()]
            except ValueError:
                raise ConfigError(f"--snapshots must be comma-separated numbers, got {value!r}") from None
        else:
            value = convert(value)
        out.setdefault(sect, {})[key] = value
    return out


def build_registry() -> CommandRegistry:
    """Every experiment command plus ``help`` and ``config``."""
    registry = CommandRegistry()
    for experiment in (
        TablesExperiment(),
        ApplyExperiment(),
        DirichletExperiment(),
        ConvergeExperiment(),
        PdeExperiment(),
        SelftestExperiment(),
    ):
        experiment.register(registry)

    async def handle_help(ctx: CommandContext) -> None:
        topic = getattr(ctx.args, "topic", None)
        text = registry.format_command_help(topic) if topic else registry.format_overview()
        sys.stdout.write(text + "\n")

    async def handle_config(ctx: CommandContext) -> None:
        sys.stdout.write(dump_yaml(ctx.run.settings))
        if ctx.args.save:
            ctx.run.config_mgr.update(ctx.run.settings)

    def configure_help(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("topic", nargs="?", default=None, help="command to describe")

    def configure_config(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--save", action="store_true", help="persist the resolved config to the config path")

    registry.register(
        Command(
            name="help",
            summary="show this message, or detailed usage for one command",
            usage="fraclap help [command]",
            handler=handle_help,
            configure=configure_help,
        )
    )
    registry.register(
        Command(
            name="config",
            summary="print the resolved configuration as YAML",
            usage=(
                "fraclap config [flags]: defaults < config file < flags, printed as YAML.\n"
                "fraclap config [flags] --save: also write it to the config path."
            ),
            handler=handle_config,
            configure=configure_config,
        )
    )
    return registry


def build_parser(registry: CommandRegistry) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclap",
        description="Finite-difference fractional Laplacian experiments.",
    )
    registry.add_subparsers(parser, parents=[common_parser()])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse flags, resolve the config, run one command; returns the exit code."""
    registry = build_registry()
    parser = build_parser(registry)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2

    # --config beats FRACLAP_CONFIG, which beats the working-directory default.
    config_path = args.config or os.environ.get(CONFIG_ENV, DEFAULT_CONFIG_PATH)
    config_mgr = ConfigManager(config_path)
    try:
        config_mgr.load()
        settings = config_mgr.overlay(overrides_from_args(args))
    except FracLapError as exc:
        _configure_logging({})
        logger.error("%s", exc)
        return exc.exit_code
    _configure_logging(settings)
    logger.debug("resolved config from %s", config_path)

    run = RunContext(config_mgr=config_mgr, settings=settings, started_at=datetime.now(UTC))
    ctx = CommandContext(args=args, run=run)
    try:
        trio.run(registry.dispatch, args.command, ctx)
    except FracLapError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    elapsed = datetime.now(UTC) - run.started_at if run.started_at else None
    logger.info("%s finished in %s", args.command, elapsed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
