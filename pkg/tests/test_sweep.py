"""Tests for the concurrent :class:`core.sweep.SweepRunner`."""

from __future__ import annotations

import threading
import time

import pytest

from core.sweep import SweepRunner


@pytest.mark.trio
async def test_results_come_back_in_registration_order() -> None:
    runner: SweepRunner[int] = SweepRunner(workers=3)
    # Later jobs finish first.
    for i in range(5):
        runner.register(f"job{i}", lambda i=i: (time.sleep(0.01 * (5 - i)), i)[1])
    assert await runner.run() == [0, 1, 2, 3, 4]
    assert len(runner) == 5


@pytest.mark.trio
async def test_failing_job_is_isolated_then_reraised() -> None:
    """A raise in one job must not stop its siblings; the failure surfaces afterwards."""
    done: list[str] = []

    def boom() -> int:
        raise ArithmeticError("kaboom")

    def good() -> int:
        done.append("good")
        return 1

    runner: SweepRunner[int] = SweepRunner(workers=1)
    runner.register("boom", boom)
    runner.register("good", good)
    with pytest.raises(ArithmeticError, match="kaboom"):
        await runner.run()
    assert done == ["good"]


@pytest.mark.trio
async def test_worker_limit_bounds_concurrency() -> None:
    lock = threading.Lock()
    state = {"now": 0, "peak": 0}

    def job() -> None:
        with lock:
            state["now"] += 1
            state["peak"] = max(state["peak"], state["now"])
        time.sleep(0.02)
        with lock:
            state["now"] -= 1

    runner: SweepRunner[None] = SweepRunner(workers=2)
    for i in range(6):
        runner.register(f"job{i}", job)
    await runner.run()
    assert state["peak"] <= 2


@pytest.mark.trio
async def test_empty_runner_returns_nothing() -> None:
    assert await SweepRunner[int]().run() == []


def test_run_sync_outside_trio() -> None:
    runner: SweepRunner[str] = SweepRunner()
    runner.register("a", lambda: "a")
    assert runner.run_sync() == ["a"]


def test_workers_must_be_positive() -> None:
    with pytest.raises(ValueError):
        SweepRunner(workers=0)
