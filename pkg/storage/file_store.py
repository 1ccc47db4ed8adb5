"""YAML persistence for experiment configuration.

Writes are atomic (temporary file + :func:`os.replace`), so an
interrupted ``fraclap config --save`` never leaves a half-written file
behind for the next run to trip over.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)


def atomic_write_text(path: str | os.PathLike[str], text: str) -> None:
    """Write ``text`` to ``path`` through a sibling temporary file."""
    target = Path(path)
    if target.parent != Path():
        target.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = target.with_name(target.name + ".tmp")
    tmp_path.write_text(text, encoding="utf-8")
    os.replace(tmp_path, target)


def dump_yaml(data: dict[str, Any]) -> str:
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


class YAMLFileStore:
    """Reads and writes one YAML mapping."""

    def __init__(self, path: str) -> None:
        self.path = path

    def exists(self) -> bool:
        return os.path.exists(self.path)

    def read(self) -> dict[str, Any] | None:
        """The stored mapping, ``{}`` for an empty file, ``None`` if unreadable or not a mapping."""
        try:
            with open(self.path, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except FileNotFoundError:
            return {}
        except yaml.YAMLError:
            logger.exception("Failed to parse YAML file %s", self.path)
            return None
        except OSError:
            logger.exception("Failed to read YAML file %s", self.path)
            return None
        if data is None:
            return {}
        return data if isinstance(data, dict) else None

    def write(self, data: dict[str, Any]) -> None:
        atomic_write_text(self.path, dump_yaml(data))
