"""Shared run context for experiment commands.

Every command handler receives a :class:`RunContext` holding the config
manager and the *resolved* settings (defaults < YAML file < flags). The
narrow accessors below turn config values into typed parameters and
raise :class:`core.errors.ConfigError` on bad input, so handlers never
touch raw dict lookups.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any

from config import ConfigManager, section
from core.errors import ConfigError
from core.models import WeightFamily, parse_family
from storage.csv_sink import write_csv


def _number(raw: Any, name: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {raw!r}")
    return value


def _optional_number(raw: Any, name: str) -> float | None:
    return None if raw is None else _number(raw, name)


@dataclass(frozen=True)
class RunContext:
    """Resolved configuration shared by every command."""

    config_mgr: ConfigManager
    settings: dict[str, Any] = field(default_factory=dict)
    started_at: datetime | None = None

    def section(self, name: str) -> dict[str, Any]:
        return section(self.settings, name)

    # --- weights / grid -------------------------------------------------

    @property
    def family(self) -> WeightFamily:
        return parse_family(str(self.section("weights").get("family", "PER")))

    @property
    def alpha(self) -> float:
        return _number(self.section("weights").get("alpha"), "weights.alpha")

    @property
    def m(self) -> int | None:
        raw = self.section("weights").get("m")
        if raw is None:
            return None
        value = int(_number(raw, "weights.m"))
        if value < 1:
            raise ConfigError(f"weights.m must be at least 1, got {raw!r}")
        return value

    @property
    def h(self) -> float:
        value = _number(self.section("grid").get("h"), "grid.h")
        if value <= 0:
            raise ConfigError(f"grid.h must be positive, got {value}")
        return value

    @property
    def L(self) -> float:
        value = _number(self.section("grid").get("L"), "grid.L")
        if value <= 0:
            raise ConfigError(f"grid.L must be positive, got {value}")
        return value

    # --- far field ------------------------------------------------------

    @property
    def far_field_enabled(self) -> bool:
        return bool(self.section("far_field").get("enabled", False))

    @property
    def beta(self) -> float | None:
        return _optional_number(self.section("far_field").get("beta"), "far_field.beta")

    @property
    def L_M(self) -> float:
        raw = _optional_number(self.section("far_field").get("L_M"), "far_field.L_M")
        return 3.0 * self.L if raw is None else raw

    # --- output / concurrency -------------------------------------------

    @property
    def output_path(self) -> str:
        return str(self.section("output").get("path", "-"))

    @property
    def precision(self) -> int:
        return int(_number(self.section("output").get("precision", 17), "output.precision"))

    @property
    def workers(self) -> int:
        value = int(_number(self.section("converge").get("workers", 4), "converge.workers"))
        if value < 1:
            raise ConfigError(f"converge.workers must be at least 1, got {value}")
        return value

    def number(self, section_name: str, key: str) -> float:
        return _number(self.section(section_name).get(key), f"{section_name}.{key}")

    def optional_number(self, section_name: str, key: str) -> float | None:
        return _optional_number(self.section(section_name).get(key), f"{section_name}.{key}")

    def window_cells(self) -> int:
        """J = L/h, the number of cells between the origin and the window edge."""
        return round(self.L / self.h)

    def truncation(self, default: int | None = None) -> int:
        """Configured m, else ``default``, else 2L/h so every window point sees the whole window."""
        if self.m is not None:
            return self.m
        return default if default is not None else 2 * self.window_cells()

    def emit(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        """Write a table to the configured output with the resolved config as header."""
        write_csv(self.output_path, header, rows, config=self.settings, precision=self.precision)
