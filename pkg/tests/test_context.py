"""Tests pinning the :class:`RunContext` accessors.

Handlers never read raw config dicts, so a bad value has to surface here
as a :class:`ConfigError` with the dotted key in the message.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Any

import pytest

from core.errors import ConfigError
from core.models import WeightFamily
from storage.csv_sink import read_csv
from tests.conftest import ContextFactory


def test_defaults(make_run_context: ContextFactory) -> None:
    ctx = make_run_context()
    assert ctx.family is WeightFamily.PER
    assert ctx.alpha == 1.0
    assert ctx.m is None
    assert (ctx.h, ctx.L) == (0.125, 8.0)
    assert ctx.L_M == 24.0
    assert ctx.far_field_enabled is False
    assert ctx.beta is None
    assert ctx.window_cells() == 64
    assert ctx.truncation() == 128
    assert ctx.truncation(7) == 7
    assert ctx.workers == 4


def test_configured_m_wins(make_run_context: ContextFactory) -> None:
    ctx = make_run_context({"weights": {"m": 12}})
    assert ctx.truncation(7) == 12


@pytest.mark.parametrize(
    ("overrides", "key"),
    [
        ({"weights": {"alpha": "x"}}, "weights.alpha"),
        ({"weights": {"m": 0}}, "weights.m"),
        ({"grid": {"h": -0.1}}, "grid.h"),
        ({"grid": {"L": float("inf")}}, "grid.L"),
        ({"converge": {"workers": 0}}, "converge.workers"),
        ({"far_field": {"beta": "slow"}}, "far_field.beta"),
    ],
)
def test_bad_values_name_their_key(make_run_context: ContextFactory, overrides: dict[str, Any], key: str) -> None:
    ctx = make_run_context(overrides)
    getter = {
        "weights.alpha": lambda: ctx.alpha,
        "weights.m": lambda: ctx.m,
        "grid.h": lambda: ctx.h,
        "grid.L": lambda: ctx.L,
        "converge.workers": lambda: ctx.workers,
        "far_field.beta": lambda: ctx.beta,
    }[key]
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        getter()


def test_context_is_frozen(make_run_context: ContextFactory) -> None:
    ctx = make_run_context()
    with pytest.raises(dataclasses.FrozenInstanceError):
        ctx.settings = {}  # type: ignore[misc]


def test_emit_writes_the_configured_output(tmp_path: Path, make_run_context: ContextFactory) -> None:
    out = tmp_path / "t.csv"
    ctx = make_run_context({"output": {"path": str(out)}})
    ctx.emit(("k", "w_k"), [(0, -2.0), (1, 1.0)])
    header, rows = read_csv(str(out))
    assert header == ["k", "w_k"]
    assert rows == [["0", "-2"], ["1", "1"]]
