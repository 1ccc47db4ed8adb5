"""Tests for :mod:`core.operator`."""

from __future__ import annotations

import math

import numpy as np
import pytest

from core.errors import DomainError, GridMismatchError, NumericalError
from core.models import ConstantExterior, GridField, TailSpec, WeightFamily
from core.operator import (
    apply,
    apply_direct,
    apply_fast,
    apply_truncated,
    energy,
    estimate_decay_exponent,
    tail_correction,
)
from core.oracle import flap_gaussian, flap_gaussian_origin, flap_lorentzian, lorentzian
from core.specfun import riesz_constant
from core.weights import make_weights

SP, PER, GL, T, Q = (WeightFamily(f) for f in ("SP", "PER", "GL", "T", "Q"))


def _random(n: int, h: float = 0.25, seed: int = 1) -> GridField:
    rng = np.random.default_rng(seed)
    return GridField(h=h, j0=-(n // 2), u=rng.uniform(-1.0, 1.0, n))


def test_delta_returns_negated_weights() -> None:
    ws = make_weights(PER, 1.3, 1.0, 10)
    u = np.zeros(11)
    u[5] = 1.0
    out = apply_direct(ws, GridField(h=1.0, j0=-5, u=u))
    np.testing.assert_allclose(out, -ws.symmetric()[ws.m - 5 : ws.m + 6], rtol=1e-15)


@pytest.mark.parametrize("family", list(WeightFamily))
def test_constants_are_annihilated_with_constant_exterior(family: WeightFamily) -> None:
    ws = make_weights(family, 0.7, 0.5, 16)
    f = GridField(h=0.5, j0=-10, u=np.full(21, 3.0))
    out = apply_direct(ws, f, exterior=ConstantExterior.uniform(3.0))
    np.testing.assert_allclose(out, 0.0, atol=1e-12)


def test_sp_is_spectrally_accurate_on_a_gaussian() -> None:
    h, L = 0.125, 8.0
    for alpha in (0.2, 1.0, 1.5):
        ws = make_weights(SP, alpha, h, int(2 * L / h))
        f = GridField.sample(lambda x: np.exp(-(x**2)), h, -L, L)
        out = apply_direct(ws, f)
        origin = int(np.flatnonzero(f.indices == 0)[0])
        assert abs(out[origin] - flap_gaussian_origin(alpha)) <= 1e-10


def test_per_gaussian_error_is_second_order() -> None:
    alpha, L = 0.8, 8.0
    errors = []
    for h in (0.25, 0.125):
        f = GridField.sample(lambda x: np.exp(-(x**2)), h, -L, L)
        ws = make_weights(PER, alpha, h, f.n)
        errors.append(float(np.max(np.abs(apply(ws, f) - flap_gaussian(alpha, f.x)))))
    assert math.log2(errors[0] / errors[1]) == pytest.approx(2.0, abs=0.2)


@pytest.mark.parametrize("exterior", [ConstantExterior(), ConstantExterior(0.3, -0.7)])
def test_fast_path_matches_direct(exterior: ConstantExterior) -> None:
    f = _random(100)
    ws = make_weights(PER, 1.3, f.h, 40)
    np.testing.assert_allclose(apply_fast(ws, f, exterior), apply_direct(ws, f, exterior=exterior), atol=1e-12)


def test_apply_picks_an_equivalent_path() -> None:
    f = _random(700)
    ws = make_weights(T, 0.6, f.h, 700)
    np.testing.assert_allclose(apply(ws, f), apply_direct(ws, f), atol=1e-11)


def test_direct_on_a_subrange_is_a_slice() -> None:
    f = _random(30)
    ws = make_weights(GL, 0.5, f.h, 12)
    full = apply_direct(ws, f)
    part = apply_direct(ws, f, indices=range(f.j0 + 5, f.j0 + 12))
    np.testing.assert_array_equal(part, full[5:12])


def test_grid_mismatches_are_rejected() -> None:
    f = _random(10)
    with pytest.raises(GridMismatchError):
        apply_direct(make_weights(PER, 1.0, 0.5, 4), f)
    ws = make_weights(PER, 1.0, f.h, 4)
    with pytest.raises(GridMismatchError):
        apply_direct(ws, f, indices=range(f.j0 - 1, f.j0 + 3))
    with pytest.raises(GridMismatchError):
        apply_direct(ws, f, indices=range(f.j0, f.j0 + 6, 2))


def test_energy_of_a_delta() -> None:
    ws = make_weights(Q, 1.1, 0.5, 8)
    u = np.zeros(9)
    u[4] = 1.0
    assert energy(ws, GridField(h=0.5, j0=-4, u=u)) == pytest.approx(-0.5 * ws.w0 / 2.0, rel=1e-14)


def test_energy_is_half_the_quadratic_form() -> None:
    f = _random(60)
    ws = make_weights(PER, 1.5, f.h, 80)
    half = 0.5 * f.h * float(np.dot(apply_direct(ws, f), f.u))
    assert energy(ws, f) == pytest.approx(half, rel=1e-12)


def test_tail_correction_at_origin() -> None:
    alpha, beta, L, LM = 0.6, 0.4, 2.0, 6.0
    c = riesz_constant(alpha)
    s = alpha + beta
    tail = TailSpec(beta=beta, L=L, L_M=LM, u_left=1.0, u_right=1.0)
    assert tail_correction(alpha, tail, 0.0, 0.0) == pytest.approx(-2.0 * c * L**beta / (s * LM**s), rel=1e-13)
    flat = TailSpec(beta=beta, L=L, L_M=LM)
    assert tail_correction(alpha, flat, 0.0, 1.0) == pytest.approx(2.0 * c * LM ** (-alpha) / alpha, rel=1e-13)


def test_truncated_path_recovers_an_algebraic_tail() -> None:
    alpha, h, L = 0.5, 0.125, 8.0
    f = GridField.sample(lambda x: lorentzian(alpha, x), h, -L, L)
    tail = TailSpec(beta=1.0 - alpha, L=L, L_M=3.0 * L)
    ws = make_weights(PER, alpha, h, 256)
    exact = flap_lorentzian(alpha, f.x)
    inner = np.abs(f.x) <= 4.0

    truncated = apply_truncated(ws, f, tail)
    assert float(np.max(np.abs(truncated - exact)[inner])) < 2e-3
    np.testing.assert_array_equal(apply(ws, f, tail), truncated)

    zero = apply_direct(ws, f)
    assert float(np.max(np.abs(zero - exact)[inner])) > 1e-2


def test_truncated_path_needs_long_enough_weights() -> None:
    f = GridField.sample(lambda x: lorentzian(0.5, x), 0.5, -2.0, 2.0)
    tail = TailSpec(beta=0.5, L=2.0, L_M=6.0)
    with pytest.raises(DomainError, match="m >="):
        apply_truncated(make_weights(PER, 0.5, 0.5, 4), f, tail)


def test_estimate_decay_exponent() -> None:
    alpha = 0.4
    f = GridField.sample(lambda x: lorentzian(alpha, x), 0.5, -64.0, 64.0)
    assert estimate_decay_exponent(f) == pytest.approx(1.0 - alpha, abs=0.02)
    with pytest.raises(NumericalError):
        estimate_decay_exponent(f.with_values(np.zeros(f.n)))
