"""Grid-refinement studies with fitted convergence order.

Targets (``converge.target`` or ``--target``):

* ``gaussian0``: error of the scheme at x = 0 for e^{-x²} on [-L, L]
  with m = 2L/h.
* ``beta_bump:k``: the same at the origin for (1 - x²)_+^{k+α/2}.
* ``lorentzian`` / ``lorentzian+tail``: sup error over the window for
  (1 + x²)^{-(1-α)/2}, with zero extension or with the algebraic far
  field (β = 1 - α unless ``far_field.beta`` is set).
* ``dirichlet:k``: sup error of the manufactured Dirichlet problem.

Each h is an independent job on the sweep runner. The truncation length
follows h, so ``weights.m`` is ignored here.
"""

from __future__ import annotations

import argparse
import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from core.commands import Command, CommandContext, CommandRegistry
from core.context import RunContext
from core.errors import ConfigError
from core.models import GridField, WeightFamily
from core.operator import apply_direct
from core.oracle import beta_bump, flap_beta_bump, flap_gaussian_origin
from core.report import CONVERGENCE_HEADER, ConvergenceReport
from core.weights import make_weights
from experiments.apply import evaluate_oracle
from experiments.dirichlet import solve_manufactured

logger = logging.getLogger(__name__)

ErrorAt = Callable[[float], float]


def _origin_error(
    family: WeightFamily,
    alpha: float,
    L: float,
    u_fn: Callable[[np.ndarray], np.ndarray],
    exact: float,
) -> ErrorAt:
    def error_at(h: float) -> float:
        ws = make_weights(family, alpha, h, 2 * round(L / h))
        field = GridField.sample(u_fn, h, -L, L)
        return abs(float(apply_direct(ws, field, range(0, 1))[0]) - exact)

    return error_at


def _target_order(raw: str, name: str) -> int:
    try:
        k = int(raw)
    except ValueError:
        raise ConfigError(f"{name} order must be an integer, got {raw!r}") from None
    if k < 0:
        raise ConfigError(f"{name} order must be nonnegative, got {k}")
    return k


def error_function(
    target: str,
    family: WeightFamily,
    alpha: float,
    *,
    L: float = 8.0,
    beta: float | None = None,
    L_M: float | None = None,
    halfwidth: float = 1.0,
) -> ErrorAt:
    """The measurement ``h -> error`` of a convergence target."""
    name, _, arg = target.strip().partition(":")
    if name == "gaussian0" and not arg:
        return _origin_error(family, alpha, L, lambda x: np.exp(-(x**2)), flap_gaussian_origin(alpha))
    if name == "beta_bump":
        k = _target_order(arg or "0", name)
        exact = float(flap_beta_bump(k, alpha, np.zeros(1))[0])
        return _origin_error(family, alpha, L, lambda x: beta_bump(k, alpha, x), exact)
    if name in ("lorentzian", "lorentzian+tail") and not arg:
        tail = name.endswith("+tail")
        decay = (1.0 - alpha) if beta is None else beta
        return lambda h: evaluate_oracle(
            family, alpha, h, L, "lorentzian", far_field=tail, beta=decay, L_M=L_M
        ).sup_error
    if name == "dirichlet":
        k = _target_order(arg or "1", name)
        return lambda h: solve_manufactured(family, alpha, h, "bump", k, halfwidth).sup_error
    raise ConfigError(
        f"unknown convergence target {target!r} "
        "(expected gaussian0, beta_bump:k, lorentzian, lorentzian+tail or dirichlet:k)"
    )


def parse_h_list(raw: str | list[float] | tuple[float, ...]) -> list[float]:
    if isinstance(raw, str):
        try:
            values = [float(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"h list must be comma-separated numbers, got {raw!r}") from None
    else:
        values = [float(v) for v in raw]
    if len(values) < 2:
        raise ConfigError("a convergence study needs at least two grid sizes")
    if any(v <= 0 for v in values) or any(b >= a for a, b in zip(values, values[1:], strict=False)):
        raise ConfigError(f"h list must be positive and strictly decreasing, got {values}")
    return values


async def run_convergence(run: RunContext, target: str, h_list: list[float]) -> ConvergenceReport:
    family, alpha = run.family, run.alpha
    error_at = error_function(
        target,
        family,
        alpha,
        L=run.L,
        beta=run.beta,
        L_M=run.L_M,
        halfwidth=run.number("dirichlet", "halfwidth"),
    )
    return await ConvergenceReport.gather(
        target=target,
        family=str(family),
        alpha=alpha,
        h_list=h_list,
        error_at=error_at,
        workers=run.workers,
    )


@dataclass
class ConvergeExperiment:
    """Registers the ``converge`` command."""

    def register(self, registry: CommandRegistry) -> None:
        registry.register(
            Command(
                name="converge",
                summary="grid-refinement study with a fitted convergence order",
                usage=(
                    "fraclap converge --target gaussian0 --family Q --alpha 0.8 "
                    "[--h-list 0.25,0.125,0.0625] [--workers 4]\n"
                    "Targets: gaussian0, beta_bump:k, lorentzian, lorentzian+tail, dirichlet:k."
                ),
                handler=self._handle_converge,
                configure=self._configure_converge,
            )
        )

    @staticmethod
    def _configure_converge(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--target", default=None, help="convergence target")
        parser.add_argument("--h-list", dest="h_list", default=None, help="comma-separated grid sizes")

    async def _handle_converge(self, ctx: CommandContext) -> None:
        run = ctx.run
        settings = run.section("converge")
        target = ctx.args.target or str(settings.get("target", "gaussian0"))
        h_list = parse_h_list(ctx.args.h_list if ctx.args.h_list else settings.get("h_list", []))
        logger.info("convergence study %s over %d grids", target, len(h_list))
        report = await run_convergence(run, target, h_list)
        logger.info("%s", report.render())
        run.emit(CONVERGENCE_HEADER, report.rows())
