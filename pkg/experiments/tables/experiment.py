"""Weight and symbol tables.

``weights`` exports w_0..w_m of one family together with the two
constants that summarise it (the CFL constant and the decay prefactor).
``symbol`` evaluates the rescaled symbol of the generated weights on
[0, π] and, where a closed form exists, its distance to it; with
``--probe`` it instead fits the near-origin accuracy order.

Config used: ``weights`` (family, alpha, m) and ``grid`` (h, L). The
symbol table always works at h = 1, since M(ξ) is h-independent.
"""

from __future__ import annotations

import argparse
import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import trio

from core.commands import Command, CommandContext, CommandRegistry
from core.errors import DomainError
from core.models import WeightFamily, WeightSet
from core.symbol import accuracy_order_probe, closed_symbol, symbol_from_weights
from core.weights import cfl_cmax, decay_prefactor, make_weights, weights_csv_rows

logger = logging.getLogger(__name__)

WEIGHTS_HEADER = ("k", "w_k")
SYMBOL_HEADER = ("xi", "M_weights", "M_closed", "abs_err")
PROBE_HEADER = ("family", "alpha", "fitted_order", "leading_coeff")

DEFAULT_SYMBOL_POINTS = 1024
DEFAULT_SYMBOL_M = 1 << 16


def _optional_constant(fn: Any, *args: Any) -> float | None:
    try:
        return float(fn(*args))
    except DomainError:
        return None


def weight_table(family: WeightFamily, alpha: float, h: float, m: int) -> tuple[WeightSet, list[tuple[int, float]]]:
    ws = make_weights(family, alpha, h, m)
    cmax = _optional_constant(cfl_cmax, family, alpha)
    decay = _optional_constant(decay_prefactor, family, alpha)
    logger.info("%s alpha=%g h=%g m=%d: C_max=%s decay prefactor=%s", family, alpha, h, m, cmax, decay)
    return ws, weights_csv_rows(ws)


def symbol_table(
    family: WeightFamily,
    alpha: float,
    m: int = DEFAULT_SYMBOL_M,
    points: int = DEFAULT_SYMBOL_POINTS,
) -> list[tuple[float, float, float | None, float | None]]:
    """Rows (ξ, M from weights, closed-form M, |difference|) on ``points`` ξ in [0, π]."""
    if points < 2:
        raise DomainError(f"symbol table needs at least 2 points, got {points}")
    xi = np.linspace(0.0, math.pi, points)
    ws = make_weights(family, alpha, 1.0, m)
    from_weights = symbol_from_weights(ws, xi)
    try:
        closed: np.ndarray | None = closed_symbol(family, alpha, xi)
    except DomainError:
        closed = None
    rows: list[tuple[float, float, float | None, float | None]] = []
    for i, x in enumerate(xi):
        if closed is None:
            rows.append((float(x), float(from_weights[i]), None, None))
        else:
            rows.append((float(x), float(from_weights[i]), float(closed[i]), abs(float(from_weights[i] - closed[i]))))
    if closed is not None:
        logger.info("%s alpha=%g max |M_weights - M_closed| = %.3e", family, alpha, float(np.max(np.abs(from_weights - closed))))
    return rows


@dataclass
class TablesExperiment:
    """Registers the ``weights`` and ``symbol`` commands."""

    def register(self, registry: CommandRegistry) -> None:
        registry.register(
            Command(
                name="weights",
                summary="export the weight table k, w_k of one family",
                usage=(
                    "fraclap weights --family Q --alpha 0.8 --h 0.125 --m 64\n"
                    "Writes one row per k = 0..m. Without --m the table spans 2L/h."
                ),
                handler=self._handle_weights,
            )
        )
        registry.register(
            Command(
                name="symbol",
                summary="tabulate the rescaled symbol, or fit its accuracy order",
                usage=(
                    "fraclap symbol --family GL --alpha 0.5 [--points 1024] [--m 65536]\n"
                    "fraclap symbol --family PER --alpha 1.5 --probe"
                ),
                handler=self._handle_symbol,
                configure=self._configure_symbol,
            )
        )

    @staticmethod
    def _configure_symbol(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--points", type=int, default=DEFAULT_SYMBOL_POINTS, help="number of ξ samples on [0, π]")
        parser.add_argument("--probe", action="store_true", help="fit the accuracy order instead")

    async def _handle_weights(self, ctx: CommandContext) -> None:
        run = ctx.run
        family, alpha, h = run.family, run.alpha, run.h
        m = run.truncation()
        _, rows = await trio.to_thread.run_sync(weight_table, family, alpha, h, m)
        run.emit(WEIGHTS_HEADER, rows)

    async def _handle_symbol(self, ctx: CommandContext) -> None:
        run = ctx.run
        family, alpha = run.family, run.alpha
        if ctx.args.probe:
            probe = await trio.to_thread.run_sync(accuracy_order_probe, family, alpha)
            logger.info("%s alpha=%g fitted order %.4f", family, alpha, probe.fitted_order)
            run.emit(PROBE_HEADER, [(str(probe.family), probe.alpha, probe.fitted_order, probe.leading_coeff)])
            return
        m = run.truncation(DEFAULT_SYMBOL_M)
        rows = await trio.to_thread.run_sync(symbol_table, family, alpha, m, ctx.args.points)
        run.emit(SYMBOL_HEADER, rows)
