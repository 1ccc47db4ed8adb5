"""A small command registry for the experiment subcommands.

Each :class:`Command` carries enough metadata to build its argparse
subparser *and* auto-generate the overview and per-command help. Adding
a new experiment is therefore a one-place change: register a new
:class:`Command` from its ``experiments/<name>`` package, and
``fraclap help`` learns about it automatically.

Design choices worth flagging:

* Lookup is exact match on the subcommand name.
* The registry doesn't know about configuration files or logging. Those
  are the entry point's job (see :mod:`fraclap_main`). Keeping the
  registry pure makes it trivial to test.
* Handlers receive a :class:`CommandContext` rather than positional
  arguments. New context fields can be added without touching every
  existing handler signature.
"""

from __future__ import annotations

import argparse
from collections.abc import Awaitable, Callable
from dataclasses import dataclass, field

from core.context import RunContext


@dataclass(frozen=True)
class CommandContext:
    """Everything a handler needs: the parsed flags and the resolved run context."""

    args: argparse.Namespace
    run: RunContext


# A handler is an async function from CommandContext to None. Handlers
# write their own output through :mod:`storage.csv_sink`.
CommandHandler = Callable[[CommandContext], Awaitable[None]]
# Adds the command-specific flags to its subparser.
ParserHook = Callable[[argparse.ArgumentParser], None]


@dataclass(frozen=True)
class Command:
    """A single subcommand.

    :param name: subcommand token, e.g. ``converge``.
    :param summary: one-line description for the overview listing.
    :param usage: longer text shown by ``help <name>`` and as the
        subparser description.
    :param handler: async callable invoked when the command matches.
    :param configure: optional hook adding command-specific flags.
    """

    name: str
    summary: str
    usage: str
    handler: CommandHandler
    configure: ParserHook | None = None


@dataclass
class CommandRegistry:
    """Holds the set of registered commands and dispatches by name."""

    _commands: dict[str, Command] = field(default_factory=dict, repr=False)

    def register(self, command: Command) -> None:
        """Add a command. Re-registering the same name overwrites it."""
        self._commands[command.name] = command

    def get(self, name: str) -> Command | None:
        return self._commands.get(name)

    def names(self) -> list[str]:
        return sorted(self._commands)

    async def dispatch(self, name: str, ctx: CommandContext) -> bool:
        """Run the handler registered under ``name``.

        Returns ``True`` if a handler ran, ``False`` if no command matched.
        """
        cmd = self._commands.get(name)
        if cmd is None:
            return False
        await cmd.handler(ctx)
        return True

    def add_subparsers(
        self,
        parser: argparse.ArgumentParser,
        parents: list[argparse.ArgumentParser],
    ) -> None:
        """One subparser per command, each inheriting the common flags."""
        sub = parser.add_subparsers(dest="command", metavar="COMMAND")
        for name in self.names():
            cmd = self._commands[name]
            child = sub.add_parser(name, help=cmd.summary, description=cmd.usage, parents=parents)
            if cmd.configure is not None:
                cmd.configure(child)

    # ------------------------------------------------------------------
    # help formatting
    # ------------------------------------------------------------------

    def format_overview(self) -> str:
        """Every registered command's summary, sorted by name."""
        if not self._commands:
            return "No commands registered."
        width = max(len(n) for n in self._commands)
        lines = ["Commands:"]
        for name in self.names():
            lines.append(f"  {name:<{width}}  {self._commands[name].summary}")
        lines.append("")
        lines.append("Run `fraclap help <command>` for detailed usage.")
        return "\n".join(lines)

    def format_command_help(self, name: str) -> str:
        cmd = self._commands.get(name)
        if cmd is None:
            return f"Unknown command `{name}`. Try `fraclap help`."
        return f"{cmd.name}: {cmd.summary}\n\n{cmd.usage}"
