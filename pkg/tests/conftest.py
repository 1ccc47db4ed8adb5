"""Shared test fixtures."""

from __future__ import annotations

import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

# Make the project importable when running ``pytest`` from the repo root.
_ROOT = Path(__file__).resolve().parent.parent
if str(_ROOT) not in sys.path:
    sys.path.insert(0, str(_ROOT))

from config import ConfigManager  # noqa: E402
from core.context import RunContext  # noqa: E402

ContextFactory = Callable[..., RunContext]


@pytest.fixture
def make_run_context(tmp_path: Path) -> ContextFactory:
    """Build a :class:`RunContext` from defaults plus nested ``overrides``; no file is read."""

    def build(overrides: dict[str, Any] | None = None) -> RunContext:
        mgr = ConfigManager(str(tmp_path / "fraclap.yaml"))
        mgr.load()
        return RunContext(config_mgr=mgr, settings=mgr.overlay(overrides or {}))

    return build
