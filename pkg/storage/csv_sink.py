"""CSV output with a reproducibility header.

Every table starts with the resolved configuration as ``#``-prefixed
YAML, followed by a plain CSV header and rows. Floats are written with
17 significant digits, enough to round-trip a double.
"""

from __future__ import annotations

import csv
import io
import logging
import sys
from collections.abc import Iterable, Sequence
from typing import Any

from storage.file_store import atomic_write_text, dump_yaml

logger = logging.getLogger(__name__)

STDOUT = "-"


def _cell(value: Any, precision: int) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float) or hasattr(value, "dtype"):
        return f"{float(value):.{precision}g}"
    return str(value)


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: dict[str, Any] | None = None,
    precision: int = 17,
) -> str:
    buf = io.StringIO()
    if config:
        for line in dump_yaml(config).splitlines():
            buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow([_cell(v, precision) for v in row])
        count += 1
    logger.debug("rendered %d CSV rows", count)
    return buf.getvalue()


def write_csv(
    path: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: dict[str, Any] | None = None,
    precision: int = 17,
) -> None:
    """Write a table to ``path``, or to standard output when ``path`` is ``-``."""
    text = render_csv(header, rows, config, precision)
    if path == STDOUT:
        sys.stdout.write(text)
        return
    atomic_write_text(path, text)
    logger.info("wrote %s", path)


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a table written by :func:`write_csv`, comments skipped."""
    with open(path, encoding="utf-8") as f:
        lines = [line for line in f if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [row for row in reader]
