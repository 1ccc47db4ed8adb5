"""Tests for :class:`utils.snapshots.SnapshotSchedule`."""

from __future__ import annotations

import pytest

from core.errors import DomainError
from utils.snapshots import SnapshotSchedule


def test_times_map_to_the_nearest_step() -> None:
    schedule = SnapshotSchedule([0.0, 0.26, 0.33, 1.0], dt=0.1, t_final=1.0)
    assert schedule.total_steps == 10
    assert schedule.due(0) == [0.0]
    assert schedule.due(3) == [0.26, 0.33]
    assert schedule.due(10) == [1.0]
    assert schedule.due(5) == []
    assert schedule.pending() == 4


def test_invalid_requests() -> None:
    with pytest.raises(DomainError):
        SnapshotSchedule([0.5, 0.2], dt=0.1, t_final=1.0)
    with pytest.raises(DomainError):
        SnapshotSchedule([1.5], dt=0.1, t_final=1.0)
    with pytest.raises(DomainError):
        SnapshotSchedule([-0.1], dt=0.1, t_final=1.0)


def test_empty_schedule() -> None:
    schedule = SnapshotSchedule([], dt=0.01, t_final=0.05)
    assert schedule.total_steps == 5
    assert schedule.pending() == 0
