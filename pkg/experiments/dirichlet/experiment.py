"""Extended Dirichlet problems with known solutions.

``dirichlet`` solves (-Δ_h)^{α/2} u = f on (-a, a) with u = 0 outside,
for one of two manufactured right-hand sides:

* ``bump`` (order ``k``): f is the fractional Laplacian of
  (1 - x²/a²)_+^{k+α/2}, which is then the exact solution.
* ``one``: f ≡ 1, whose solution is a^α v_G(x/a), the mean exit time.

``supersolution`` sweeps the nonnegative families over α and reports
whether the discrete operator of v_G stays above 1 on the interior.
"""

from __future__ import annotations

import argparse
import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import trio

from core.commands import Command, CommandContext, CommandRegistry
from core.dirichlet import (
    DirichletProblem,
    cells_per_halfwidth,
    check_max_principle,
    check_supersolution_vG,
    solve,
)
from core.errors import ConfigError
from core.models import GridField, WeightFamily
from core.oracle import beta_bump, flap_beta_bump, v_g
from core.sweep import SweepRunner
from core.weights import make_weights

logger = logging.getLogger(__name__)

DIRICHLET_HEADER = ("x", "u_h", "u_exact", "abs_err")
SUPERSOLUTION_HEADER = ("family", "alpha", "holds", "min_value")
SUPERSOLUTION_ALPHAS = tuple(0.25 * i for i in range(1, 8))

Function = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


def manufactured(rhs: str, k: int, alpha: float, halfwidth: float = 1.0) -> tuple[Function, Function]:
    """(f, exact u) of a manufactured problem on (-halfwidth, halfwidth)."""
    a = halfwidth
    if rhs == "bump":
        if k < 0:
            raise ConfigError(f"dirichlet.k must be nonnegative, got {k}")
        return (
            lambda x: a ** (-alpha) * flap_beta_bump(k, alpha, x / a),
            lambda x: beta_bump(k, alpha, x / a),
        )
    if rhs == "one":
        return (lambda x: np.ones_like(x)), (lambda x: a**alpha * v_g(alpha, x / a))
    raise ConfigError(f"dirichlet.rhs must be 'bump' or 'one', got {rhs!r}")


@dataclass(frozen=True, eq=False)
class DirichletRun:
    solution: GridField
    exact: npt.NDArray[np.float64]
    max_principle: bool

    @property
    def sup_error(self) -> float:
        return float(np.max(np.abs(self.solution.u - self.exact)))

    def rows(self) -> list[tuple[float, float, float, float]]:
        return [
            (float(x), float(u), float(e), abs(float(u - e)))
            for x, u, e in zip(self.solution.x, self.solution.u, self.exact, strict=True)
        ]


def solve_manufactured(
    family: WeightFamily,
    alpha: float,
    h: float,
    rhs: str = "bump",
    k: int = 1,
    halfwidth: float = 1.0,
    m: int | None = None,
) -> DirichletRun:
    count = cells_per_halfwidth(halfwidth, h)
    f_fn, u_fn = manufactured(rhs, k, alpha, halfwidth)
    ws = make_weights(family, alpha, h, m if m is not None else 2 * count)
    problem = DirichletProblem.from_functions(ws, f_fn, halfwidth=halfwidth)
    u = solve(problem)
    # The principle is checked on the solution padded with its zero exterior.
    padded = GridField(h=h, j0=-count, u=np.concatenate([[0.0], u.u, [0.0]]))
    verdict = check_max_principle(ws, padded, range(1 - count, count))
    return DirichletRun(solution=u, exact=u_fn(u.x), max_principle=verdict)


async def supersolution_sweep(
    h: float,
    families: tuple[WeightFamily, ...] = (
        WeightFamily.SP,
        WeightFamily.PER,
        WeightFamily.GL,
        WeightFamily.T,
        WeightFamily.Q,
    ),
    alphas: tuple[float, ...] = SUPERSOLUTION_ALPHAS,
    workers: int = 4,
) -> list[tuple[str, float, bool, float]]:
    """Supersolution verdicts; SP only enters for α < 1, where its weights are nonnegative."""
    runner: SweepRunner[tuple[str, float, bool, float]] = SweepRunner(workers=workers)
    for family in families:
        for alpha in alphas:
            if family == WeightFamily.SP and alpha >= 1.0:
                continue

            def job(family: WeightFamily = family, alpha: float = alpha) -> tuple[str, float, bool, float]:
                holds, lowest = check_supersolution_vG(family, alpha, h)
                return str(family), alpha, holds, lowest

            runner.register(f"supersolution {family} alpha={alpha:g}", job)
    return await runner.run()


@dataclass
class DirichletExperiment:
    """Registers the ``dirichlet`` and ``supersolution`` commands."""

    def register(self, registry: CommandRegistry) -> None:
        registry.register(
            Command(
                name="dirichlet",
                summary="solve a manufactured extended Dirichlet problem",
                usage=(
                    "fraclap dirichlet --family Q --alpha 1.5 --h 0.03125 [--rhs bump|one] [--k 1]\n"
                    "The domain is (-a, a) with a = dirichlet.halfwidth; a/h must be an integer."
                ),
                handler=self._handle_dirichlet,
                configure=self._configure_dirichlet,
            )
        )
        registry.register(
            Command(
                name="supersolution",
                summary="check that v_G is a discrete supersolution across families and alpha",
                usage="fraclap supersolution --h 0.03125",
                handler=self._handle_supersolution,
            )
        )

    @staticmethod
    def _configure_dirichlet(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--rhs", choices=("bump", "one"), default=None, help="manufactured right-hand side")
        parser.add_argument("--k", type=int, default=None, help="bump order")

    async def _handle_dirichlet(self, ctx: CommandContext) -> None:
        run = ctx.run
        settings = run.section("dirichlet")
        rhs = ctx.args.rhs or str(settings.get("rhs", "bump"))
        k = ctx.args.k if ctx.args.k is not None else int(settings.get("k", 1))
        halfwidth = run.number("dirichlet", "halfwidth")
        result = await trio.to_thread.run_sync(
            lambda: solve_manufactured(run.family, run.alpha, run.h, rhs, k, halfwidth, run.m)
        )
        if not result.max_principle:
            logger.warning("discrete maximum principle failed for %s alpha=%g", run.family, run.alpha)
        logger.info("h,sup_error = %.17g,%.17g", run.h, result.sup_error)
        run.emit(DIRICHLET_HEADER, result.rows())

    async def _handle_supersolution(self, ctx: CommandContext) -> None:
        run = ctx.run
        rows = await supersolution_sweep(run.h, workers=run.workers)
        failed = [r for r in rows if not r[2]]
        logger.info("supersolution holds in %d of %d cases", len(rows) - len(failed), len(rows))
        run.emit(SUPERSOLUTION_HEADER, rows)
