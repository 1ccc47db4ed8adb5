"""Convergence report for a grid-refinement study.

Why a separate module
---------------------

The ``converge`` command has to fan one error measurement out over a
list of grid sizes, fit the observed order, and render the result as a
table. Putting the fan-out and the fit inside
:mod:`experiments.converge` would conflate "what error do we measure"
with "how do we sweep and summarise it" and make either hard to test
on its own.

:class:`ConvergenceReport` is a plain data carrier. :meth:`gather`
takes the measurement as a callable ``h -> error`` and runs it through
:class:`core.sweep.SweepRunner`; :meth:`rows` and :meth:`render` only
format what was gathered.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

from core.errors import NumericalError
from core.sweep import SweepRunner
from utils.fitting import fit_slope, observed_rates

logger = logging.getLogger(__name__)

CONVERGENCE_HEADER = ("h", "error", "observed_rate", "in_fit")


@dataclass(frozen=True)
class ConvergenceReport:
    """Errors at each grid size plus the fitted order."""

    target: str
    family: str
    alpha: float
    h: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_slope: float | None
    fit_window: range

    @classmethod
    async def gather(
        cls,
        *,
        target: str,
        family: str,
        alpha: float,
        h_list: Sequence[float],
        error_at: Callable[[float], float],
        workers: int = 4,
    ) -> ConvergenceReport:
        """Measure ``error_at(h)`` for every ``h`` concurrently and fit the slope."""
        runner: SweepRunner[float] = SweepRunner(workers=workers)
        for h in h_list:
            runner.register(f"{target} h={h:g}", lambda h=h: float(error_at(h)))
        errors = await runner.run()

        slope: float | None
        try:
            slope, window = fit_slope(h_list, errors)
        except NumericalError as exc:
            logger.warning("no convergence slope for %s: %s", target, exc)
            slope, window = None, range(0)
        return cls(
            target=target,
            family=family,
            alpha=alpha,
            h=tuple(float(v) for v in h_list),
            errors=tuple(errors),
            fitted_slope=slope,
            fit_window=window,
        )

    def rows(self) -> list[tuple[Any, ...]]:
        rates = observed_rates(self.h, self.errors) if all(e > 0 for e in self.errors) else None
        out: list[tuple[Any, ...]] = []
        for i, (h, err) in enumerate(zip(self.h, self.errors, strict=True)):
            rate: float | None = None if rates is None or i == 0 else float(rates[i])
            out.append((h, err, rate, i in self.fit_window))
        return out

    def render(self) -> str:
        """Human-readable summary line for the log."""
        slope = "n/a" if self.fitted_slope is None else f"{self.fitted_slope:.3f}"
        return (
            f"{self.target} [{self.family}, alpha={self.alpha:g}]: "
            f"fitted order {slope} over {len(self.fit_window)} of {len(self.h)} grids"
        )
