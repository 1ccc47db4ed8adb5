"""Tests for the explicit time steppers in :mod:`core.evolve`."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from core.errors import CFLViolation, DomainError
from core.evolve import (
    EvolutionConfig,
    FluxKind,
    PdeKind,
    cosine_bump,
    default_lambda,
    heat_leakage,
    max_slope,
    run,
    sign_data,
    step_burgers,
    step_heat,
    step_thinfilm,
    thinfilm_initial,
    thinfilm_mass,
    thinfilm_steady,
    thinfilm_step_limit,
)
from core.models import ZERO_EXTERIOR, ConstantExterior, GridField, WeightFamily
from core.oracle import heat_sign_green
from core.specfun import riesz_constant
from core.weights import make_weights

PER, Q = WeightFamily.PER, WeightFamily.Q


def _delta(h: float, half: int) -> GridField:
    u = np.zeros(2 * half + 1)
    u[half] = 1.0
    return GridField(h=h, j0=-half, u=u)


def test_heat_step_of_a_delta_spreads_the_weights() -> None:
    ws = make_weights(PER, 0.8, 0.5, 6)
    dt = 0.1
    out = step_heat(ws, _delta(0.5, 6), dt)
    assert out.u[6] == pytest.approx(1.0 + dt * ws.w0, rel=1e-14)
    np.testing.assert_allclose(out.u[7:], dt * ws.w[1:], rtol=1e-14)
    np.testing.assert_allclose(out.u, out.u[::-1], rtol=1e-14)


def test_heat_step_rejects_unstable_dt() -> None:
    ws = make_weights(PER, 1.0, 0.25, 8)
    with pytest.raises(CFLViolation):
        step_heat(ws, _delta(0.25, 8), 1.01 / -ws.w0)
    with pytest.raises(CFLViolation):
        EvolutionConfig(kind=PdeKind.HEAT, ws=ws, dt=0.95 / -ws.w0, t_final=1.0)
    EvolutionConfig(kind=PdeKind.HEAT, ws=ws, dt=0.85 / -ws.w0, t_final=1.0)


def test_config_validation() -> None:
    ws = make_weights(PER, 1.0, 0.25, 8)
    with pytest.raises(DomainError):
        EvolutionConfig(kind=PdeKind.HEAT, ws=ws, dt=0.0, t_final=1.0)
    with pytest.raises(DomainError):
        EvolutionConfig(kind=PdeKind.BURGERS, ws=ws, dt=0.01, t_final=1.0, kappa=-1.0)
    cfg = EvolutionConfig(kind=PdeKind.THINFILM, ws=ws, dt=1.0, t_final=1.0)
    assert cfg.drift == pytest.approx(default_lambda(1.0))
    assert default_lambda(1.0) == pytest.approx(4.0 * riesz_constant(1.0))


def test_heat_of_sign_data_follows_the_green_function() -> None:
    alpha, h, L, t = 0.5, 0.1, 10.0, 0.5
    u0 = GridField.sample(sign_data, h, -L, L)
    ws = make_weights(PER, alpha, h, 200)
    config = EvolutionConfig(
        kind=PdeKind.HEAT, ws=ws, dt=0.01, t_final=t, exterior=ConstantExterior(left=-1.0, right=1.0)
    )
    final = run(config, u0).final
    probe = np.abs(final.x) <= 5.0
    x = final.x[probe][::10]
    got = final.u[probe][::10]
    assert float(np.max(np.abs(got - heat_sign_green(alpha, t, x)))) <= 5e-2
    np.testing.assert_allclose(final.u, -final.u[::-1], atol=1e-12)


def test_heat_keeps_sign_and_balances_mass_against_leakage() -> None:
    ws = make_weights(PER, 0.8, 0.25, 32)
    f = GridField.sample(lambda x: np.exp(-(x**2)), 0.25, -4.0, 4.0)
    dt = 0.9 / -ws.w0
    for _ in range(20):
        before = f.h * float(f.u.sum())
        leak = heat_leakage(ws, f)
        f = step_heat(ws, f, dt)
        assert float(f.u.min()) >= 0.0
        assert f.h * float(f.u.sum()) == pytest.approx(before - dt * leak, abs=1e-10)
    assert leak > 0


def test_heat_leakage_needs_the_whole_window() -> None:
    ws = make_weights(PER, 0.8, 0.25, 8)
    with pytest.raises(DomainError):
        heat_leakage(ws, GridField.sample(lambda x: np.exp(-(x**2)), 0.25, -4.0, 4.0))


def test_heat_snapshots() -> None:
    ws = make_weights(PER, 1.0, 0.25, 16)
    config = EvolutionConfig(kind=PdeKind.HEAT, ws=ws, dt=0.05, t_final=0.5)
    trace = run(config, _delta(0.25, 8), snapshot_times=[0.1, 0.25, 0.5])
    assert trace.times == (0.0, 0.1, 0.25, 0.5)
    assert len(trace.fields) == len(trace.masses) == 4
    # Zero exterior: mass leaks out of the window.
    assert trace.masses[-1] < trace.masses[0]
    assert float(np.max(trace.final.u)) < 1.0


def test_burgers_keeps_constants() -> None:
    ws = make_weights(PER, 1.2, 0.1, 20)
    f = GridField(h=0.1, j0=-10, u=np.full(21, 0.7))
    for flux in FluxKind:
        out = step_burgers(ws, f, 0.02, 1.0, flux, ConstantExterior.uniform(0.7))
        np.testing.assert_allclose(out.u, 0.7, atol=1e-12)


def test_burgers_step_rejects_advective_violation() -> None:
    ws = make_weights(PER, 1.2, 0.1, 20)
    f = GridField(h=0.1, j0=-10, u=np.full(21, 2.0))
    with pytest.raises(CFLViolation):
        step_burgers(ws, f, 0.06, 0.0)


def test_inviscid_burgers_opens_a_rarefaction_fan() -> None:
    h, L, t = 0.05, 4.0, 2.0
    u0 = GridField.sample(sign_data, h, -L, L)
    ws = make_weights(PER, 1.0, h, 4)
    config = EvolutionConfig(
        kind=PdeKind.BURGERS,
        ws=ws,
        dt=0.025,
        t_final=t,
        kappa=0.0,
        exterior=ConstantExterior(left=-1.0, right=1.0),
    )
    final = run(config, u0).final
    inner = np.abs(final.x) <= 3.0
    fan = np.clip(final.x / t, -1.0, 1.0)
    assert float(np.max(np.abs(final.u - fan)[inner])) < 0.1
    assert max_slope(final) < max_slope(u0)


def test_inviscid_godunov_run_keeps_the_initial_range() -> None:
    h = 0.05
    for init, exterior in (
        (sign_data, ConstantExterior(left=-1.0, right=1.0)),
        (cosine_bump, ZERO_EXTERIOR),
    ):
        u0 = GridField.sample(init, h, -4.0, 4.0)
        ws = make_weights(PER, 1.0, h, 4)
        config = EvolutionConfig(
            kind=PdeKind.BURGERS, ws=ws, dt=0.025, t_final=2.0, kappa=0.0, exterior=exterior
        )
        trace = run(config, u0, snapshot_times=[0.5, 1.0, 1.5, 2.0])
        lo, hi = float(u0.u.min()), float(u0.u.max())
        for f in trace.fields:
            assert float(f.u.min()) >= lo - 1e-12
            assert float(f.u.max()) <= hi + 1e-12


def test_burgers_config_rejects_an_advective_violation() -> None:
    ws = make_weights(PER, 1.2, 0.1, 20)
    with pytest.raises(CFLViolation):
        EvolutionConfig(kind=PdeKind.BURGERS, ws=ws, dt=0.06, t_final=1.0, kappa=0.0, u_max=2.0)
    EvolutionConfig(kind=PdeKind.BURGERS, ws=ws, dt=0.04, t_final=1.0, kappa=0.0, u_max=2.0)


def _steady_slope(alpha: float, kappa: float, h: float) -> float:
    u0 = GridField.sample(lambda x: sign_data(x, -1.0), h, -8.0, 8.0)
    ws = make_weights(PER, alpha, h, u0.n)
    dt = 0.5 * min(h, 1.0 / (kappa * -ws.w0))
    config = EvolutionConfig(
        kind=PdeKind.BURGERS,
        ws=ws,
        dt=dt,
        t_final=2.0,
        kappa=kappa,
        exterior=ConstantExterior(left=1.0, right=-1.0),
        u_max=1.0,
    )
    final = run(config, u0).final
    assert float(np.max(np.abs(final.u))) <= 1.0 + 1e-12
    return max_slope(final)


def test_strong_diffusion_keeps_the_front_resolved() -> None:
    slopes = [_steady_slope(1.2, 1.0, h) for h in (0.1, 0.05, 0.025)]
    assert max(slopes) < 3.0
    assert max(slopes) / min(slopes) < 1.5


def test_weak_diffusion_lets_the_front_steepen_with_the_grid() -> None:
    slopes = [_steady_slope(0.4, 0.1, h) for h in (0.1, 0.05, 0.025)]
    assert slopes[1] > 1.5 * slopes[0]
    assert slopes[2] > 1.5 * slopes[1]


def test_thinfilm_conserves_mass() -> None:
    alpha, h = 1.0, 0.125
    u0 = GridField.sample(lambda x: thinfilm_initial(alpha, x), h, -4.0, 4.0)
    ws = make_weights(Q, alpha, h, u0.n)
    config = EvolutionConfig(kind=PdeKind.THINFILM, ws=ws, dt=1e-4, t_final=2e-3)
    trace = run(config, u0, snapshot_times=[1e-3, 2e-3])
    assert trace.masses[-1] == pytest.approx(trace.masses[0], rel=1e-12)
    assert trace.masses[0] == pytest.approx(0.8 * thinfilm_mass(alpha), rel=1e-6)


def test_thinfilm_step_rejects_dt_above_its_limit() -> None:
    alpha, h = 1.0, 0.125
    u0 = GridField.sample(lambda x: thinfilm_initial(alpha, x), h, -4.0, 4.0)
    ws = make_weights(Q, alpha, h, u0.n)
    limit = thinfilm_step_limit(ws, u0, default_lambda(alpha))
    assert 0 < limit < math.inf
    with pytest.raises(CFLViolation):
        step_thinfilm(ws, u0, 1.5 * limit, default_lambda(alpha))


def test_thinfilm_steady_profile_has_the_stationary_mass() -> None:
    alpha = 0.6
    mass, _ = integrate.quad(lambda x: float(thinfilm_steady(alpha, np.array(x))), -1.0, 1.0)
    assert mass == pytest.approx(thinfilm_mass(alpha), rel=1e-8)


def test_thinfilm_mobility_is_clamped_where_the_film_is_negative() -> None:
    u = np.zeros(21)
    u[3:8] = -0.1
    u[12:17] = np.array([0.2, 0.6, 1.0, 0.6, 0.2])
    f = GridField(h=0.25, j0=-10, u=u)
    ws = make_weights(PER, 1.0, 0.25, 20)
    out = step_thinfilm(ws, f, 0.5 * thinfilm_step_limit(ws, f, 0.0), 0.0)
    np.testing.assert_array_equal(out.u[:9], u[:9])
    assert out.h * float(out.u.sum()) == pytest.approx(f.h * float(u.sum()), abs=1e-14)


def test_thinfilm_approaches_the_steady_state() -> None:
    alpha, h = 1.0, 0.1
    u0 = GridField.sample(lambda x: thinfilm_initial(alpha, x), h, -4.0, 4.0)
    ws = make_weights(PER, alpha, h, u0.n)
    config = EvolutionConfig(kind=PdeKind.THINFILM, ws=ws, dt=1e-3, t_final=0.4)
    trace = run(config, u0, snapshot_times=[0.05, 0.1, 0.2, 0.4])
    assert trace.times == (0.0, 0.05, 0.1, 0.2, 0.4)
    gaps = [float(np.max(np.abs(f.u - thinfilm_steady(alpha, f.x)))) for f in trace.fields]
    assert all(b < a for a, b in zip(gaps, gaps[1:], strict=False))
    np.testing.assert_allclose(trace.masses, trace.masses[0], rtol=1e-10)
