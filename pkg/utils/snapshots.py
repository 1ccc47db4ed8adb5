"""Snapshot scheduling for explicit time loops.

A time loop advances in whole steps of ``dt``; requested snapshot times
rarely fall on a step. :class:`SnapshotSchedule` maps every requested
time to the nearest step once, up front, so the loop only asks
:meth:`SnapshotSchedule.due` after each step. The loop itself lives in
:func:`core.evolve.run`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable

from core.errors import DomainError

logger = logging.getLogger(__name__)


class SnapshotSchedule:
    """Requested times keyed by the step that records them."""

    def __init__(self, times: Iterable[float], dt: float, t_final: float) -> None:
        """Build the schedule.

        :param times: strictly increasing times within ``[0, t_final]``.
        :param dt: step size of the loop.
        :param t_final: end of the run.
        """
        requested = [float(t) for t in times]
        if any(b <= a for a, b in zip(requested, requested[1:], strict=False)):
            raise DomainError("snapshot times must be strictly increasing")
        if requested and (requested[0] < 0 or requested[-1] > t_final * (1.0 + 1e-12)):
            raise DomainError(f"snapshot times must lie in [0, {t_final}]")
        self._dt = dt
        self._total = round(t_final / dt)
        self._by_step: dict[int, list[float]] = {}
        for t in requested:
            step = min(round(t / dt), self._total)
            self._by_step.setdefault(step, []).append(t)
            if abs(step * dt - t) > 1e-9 * max(1.0, t):
                logger.debug("snapshot t=%g recorded at step %d (t=%g)", t, step, step * dt)

    @property
    def total_steps(self) -> int:
        return self._total

    def due(self, step: int) -> list[float]:
        """Requested times recorded after ``step`` steps (empty if none)."""
        return self._by_step.get(step, [])

    def pending(self) -> int:
        return sum(len(v) for v in self._by_step.values())
