"""Concurrent sweep runner.

Why this exists
---------------

A convergence study evaluates the same experiment at five or more grid
sizes, and the identity suite repeats cheap checks across families and
α. Each job is a blocking numpy call. Rather than have every experiment
spin up its own thread pool, this module owns the fan-out once:
experiments register named jobs and await :meth:`SweepRunner.run`.

Design notes
------------

* Worker threads. Each job runs on a trio worker thread through
  :func:`trio.to_thread.run_sync`; numpy releases the GIL inside its
  kernels, so FFTs and dense solves of different jobs overlap. A
  :class:`trio.CapacityLimiter` bounds the number of jobs in flight.

* Failure isolation. A failing job is logged with its name and does not
  cancel its siblings. Once every job has finished, the first failure
  (in registration order) is re-raised so the CLI maps it to an exit
  code.

* Ordered results. :meth:`SweepRunner.run` returns results in
  registration order regardless of completion order.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Generic, TypeVar, cast

import trio

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class SweepJob(Generic[T]):
    """A registered job: a name (for logs) and a blocking callable."""

    name: str
    fn: Callable[[], T]


class SweepRunner(Generic[T]):
    """Runs registered jobs on at most ``workers`` threads."""

    def __init__(self, *, workers: int = 4) -> None:
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self._jobs: list[SweepJob[T]] = []
        self._workers = workers

    def register(self, name: str, fn: Callable[[], T]) -> None:
        """Register a blocking job."""
        self._jobs.append(SweepJob(name=name, fn=fn))

    @property
    def workers(self) -> int:
        return self._workers

    def __len__(self) -> int:
        return len(self._jobs)

    async def run(self) -> list[T]:
        """Run every registered job; return results in registration order."""
        jobs = list(self._jobs)
        limiter = trio.CapacityLimiter(self._workers)
        results: list[T | None] = [None] * len(jobs)
        failures: list[BaseException | None] = [None] * len(jobs)

        async def _one(index: int, job: SweepJob[T]) -> None:
            try:
                results[index] = await trio.to_thread.run_sync(job.fn, limiter=limiter)
            except Exception as exc:
                logger.exception("sweep job %s failed", job.name)
                failures[index] = exc
            else:
                logger.debug("sweep job %s finished", job.name)

        async with trio.open_nursery() as nursery:
            for index, job in enumerate(jobs):
                nursery.start_soon(_one, index, job)

        for exc in failures:
            if exc is not None:
                raise exc
        return cast(list[T], results)

    def run_sync(self) -> list[T]:
        """Blocking entry point for callers outside a trio loop."""
        return trio.run(self.run)
