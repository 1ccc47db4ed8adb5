"""Tests for :mod:`utils.fitting`."""

from __future__ import annotations

import numpy as np
import pytest

from core.errors import DomainError, NumericalError
from utils.fitting import fit_slope, observed_rates, pre_saturation_window

H = [1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64]


def test_exact_power_law() -> None:
    err = [3.0 * h**1.75 for h in H]
    slope, window = fit_slope(H, err)
    assert slope == pytest.approx(1.75, rel=1e-12)
    assert window == range(0, 5)
    np.testing.assert_allclose(observed_rates(H, err)[1:], 1.75, rtol=1e-12)
    assert observed_rates(H, err)[0] == 0.0


def test_saturated_tail_is_dropped() -> None:
    err = [1e-2, 2.5e-3, 6.25e-4, 1e-12, 1.2e-12]
    # The last decreasing point sits within 3x of the floor and goes too.
    assert pre_saturation_window(err) == range(0, 3)
    slope, window = fit_slope(H, err)
    assert window == range(0, 3)
    assert slope == pytest.approx(2.0, rel=1e-12)


def test_plateau_keeps_points_well_above_the_floor() -> None:
    err = [1e-4, 1.1e-8, 1e-8, 1.05e-8, 1e-8]
    assert pre_saturation_window(err) == range(0, 1)
    with pytest.raises(NumericalError):
        fit_slope(H, err)


def test_inputs_are_validated() -> None:
    with pytest.raises(DomainError):
        fit_slope([0.1, 0.2], [1.0, 0.5])
    with pytest.raises(DomainError):
        fit_slope([0.2, 0.1], [1.0])
    with pytest.raises(NumericalError):
        fit_slope([0.2, 0.1], [1.0, 0.0])
