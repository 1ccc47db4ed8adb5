"""Explicit time stepping of three nonlocal evolution equations.

* fractional heat       u_t = -(-Δ)^{α/2} u
* fractal Burgers       u_t + (u²/2)_x + κ(-Δ)^{α/2} u = 0
* fractional thin film  u_t = ∂_x(u ∂_x (-Δ)^{α/2} u) + λ ∂_x(x u)

All three use forward Euler in time. Heat and Burgers read exterior
values through the operator's exterior policies; the thin film is
compactly supported and uses zero extension with no-flux walls, so its
mass is conserved to rounding.

Step restrictions
-----------------

Every ``step_*`` function raises :class:`core.errors.CFLViolation` when
``dt`` exceeds the bound of its scheme (safety factor 1). The
:class:`EvolutionConfig` applies the 0.9 safety factor to the
diffusive bound at construction, and to the Burgers advective bound when
``u_max`` is given. :func:`run` checks the advective bound on the initial
data again and sub-cycles the thin film when its bound is tighter than
``dt``. The thin-film face mobility is clamped at zero, so dips below
zero never turn the flux anti-diffusive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import numpy.typing as npt
from scipy import special

from core.errors import CFLViolation, DomainError, NumericalError
from core.models import ZERO_EXTERIOR, Exterior, GridField, WeightSet
from core.operator import apply, check_grid, exterior_values
from core.specfun import riesz_constant
from utils.snapshots import SnapshotSchedule

logger = logging.getLogger(__name__)

SAFETY = 0.9
# Abort when max|u| grows past this multiple of its initial value.
_DIVERGENCE_FACTOR = 2.0


class PdeKind(StrEnum):
    HEAT = "heat"
    BURGERS = "burgers"
    THINFILM = "thinfilm"


class FluxKind(StrEnum):
    GODUNOV = "godunov"
    LAX_FRIEDRICHS = "lax-friedrichs"


def default_lambda(alpha: float) -> float:
    """Drift 2(1+α)C_{1,α} for which (1-x²)_+^{1+α/2} is stationary."""
    return 2.0 * (1.0 + alpha) * riesz_constant(alpha)


@dataclass(frozen=True)
class EvolutionConfig:
    kind: PdeKind
    ws: WeightSet
    dt: float
    t_final: float
    kappa: float = 1.0
    lam: float | None = None
    exterior: Exterior = ZERO_EXTERIOR
    flux: FluxKind = FluxKind.GODUNOV
    safety: float = SAFETY
    # Bound on |u| for the Burgers advective restriction, usually max|u0|.
    u_max: float | None = None

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise DomainError(f"time step must be positive, got {self.dt}")
        if self.t_final < 0:
            raise DomainError(f"final time must be nonnegative, got {self.t_final}")
        if self.kappa < 0:
            raise DomainError(f"diffusion coefficient must be nonnegative, got {self.kappa}")
        diffusivity = {PdeKind.HEAT: 1.0, PdeKind.BURGERS: self.kappa}.get(self.kind, 0.0)
        if diffusivity > 0:
            bound = self.safety / (diffusivity * -self.ws.w0)
            if self.dt > bound:
                raise CFLViolation(
                    f"{self.kind} step dt={self.dt:g} exceeds {self.safety:g}·C_max·h^α/κ = {bound:.6g}"
                )
        if self.kind == PdeKind.BURGERS and self.u_max:
            advective = self.safety * self.ws.h / abs(self.u_max)
            if self.dt > advective:
                raise CFLViolation(
                    f"Burgers step dt={self.dt:g} exceeds {self.safety:g}·h/max|u| = {advective:.6g}"
                )

    @property
    def drift(self) -> float:
        return default_lambda(self.ws.alpha) if self.lam is None else self.lam


@dataclass(frozen=True)
class EvolutionTrace:
    """Snapshots of a run; ``masses`` is h·Σu at each snapshot."""

    times: tuple[float, ...]
    fields: tuple[GridField, ...]
    masses: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.times, self.times[1:], strict=False)):
            raise DomainError("snapshot times must be strictly increasing")

    @property
    def final(self) -> GridField:
        return self.fields[-1]


# ----------------------------------------------------------------------
# single steps
# ----------------------------------------------------------------------


def step_heat(ws: WeightSet, f: GridField, dt: float, exterior: Exterior = ZERO_EXTERIOR) -> GridField:
    """u^{n+1} = (1 + dt w_0) u^n + dt Σ_{k≠0} w_k u^n_{j-k}."""
    check_grid(ws, f)
    if 1.0 + dt * ws.w0 < 0.0:
        raise CFLViolation(f"heat step dt={dt:g} exceeds (-w_0)^-1 = {-1.0 / ws.w0:.6g}")
    return f.with_values(f.u - dt * apply(ws, f, exterior))


def heat_leakage(ws: WeightSet, f: GridField) -> float:
    """Mass per unit time the heat step sends out of the window under a zero exterior.

    h·Σ_i u_i Σ_{j outside} w_{j-i}; one step changes h·Σu by exactly
    -dt times this. Needs m ≥ n - 1 so every pair inside the window is
    covered by a stored weight.
    """
    check_grid(ws, f)
    if f.n - 1 > ws.m:
        raise DomainError(f"leakage needs m >= {f.n - 1}, got m={ws.m}")
    partial = np.concatenate([[0.0], np.cumsum(ws.w[1 : f.n])])
    i = np.arange(f.n)
    outside = -ws.w0 - partial[i] - partial[f.n - 1 - i]
    return f.h * float(outside @ f.u)


def _burgers_flux(ul: npt.NDArray[np.float64], ur: npt.NDArray[np.float64], kind: FluxKind) -> npt.NDArray[np.float64]:
    if kind == FluxKind.GODUNOV:
        return np.maximum(0.5 * np.maximum(ul, 0.0) ** 2, 0.5 * np.minimum(ur, 0.0) ** 2)
    speed = np.maximum(np.abs(ul), np.abs(ur))
    return 0.25 * (ul**2 + ur**2) - 0.5 * speed * (ur - ul)


def step_burgers(
    ws: WeightSet,
    f: GridField,
    dt: float,
    kappa: float,
    flux: FluxKind = FluxKind.GODUNOV,
    exterior: Exterior = ZERO_EXTERIOR,
) -> GridField:
    """Conservative flux difference for u²/2 plus κ times the discrete operator."""
    check_grid(ws, f)
    h = f.h
    ghost = exterior_values(exterior, f, np.array([(f.j0 - 1) * h, (f.j0 + f.n) * h]))
    padded = np.concatenate([[ghost[0]], f.u, [ghost[1]]])
    speed = float(np.max(np.abs(padded)))
    if dt * speed > h:
        raise CFLViolation(f"Burgers step dt={dt:g} exceeds h/max|u| = {h / speed:.6g}")
    if kappa > 0 and dt * kappa * -ws.w0 > 1.0:
        raise CFLViolation(f"Burgers step dt={dt:g} exceeds (κ(-w_0))^-1 = {1.0 / (kappa * -ws.w0):.6g}")

    faces = _burgers_flux(padded[:-1], padded[1:], flux)
    u = f.u - dt / h * (faces[1:] - faces[:-1])
    if kappa > 0:
        u -= dt * kappa * apply(ws, f, exterior)
    return f.with_values(u)


def _thinfilm_limit(ws: WeightSet, f: GridField, p: npt.NDArray[np.float64], lam: float) -> float:
    h = f.h
    slope = float(np.max(np.abs(np.diff(p)))) / h if f.n > 1 else 0.0
    edge = float(np.max(np.abs(f.x)))
    peak = float(np.max(np.abs(f.u)))
    rate = slope / h + abs(lam) * (edge / h + 1.0) + 8.0 * peak * -ws.w0 / h**2
    return math.inf if rate == 0.0 else 1.0 / rate


def _thinfilm_update(f: GridField, p: npt.NDArray[np.float64], dt: float, lam: float) -> GridField:
    h = f.h
    u_face = 0.5 * (f.u[1:] + f.u[:-1])
    mobility = np.maximum(u_face, 0.0)
    x_face = (f.x[1:] + f.x[:-1]) / 2.0
    phi = mobility * np.diff(p) / h + lam * x_face * u_face
    phi = np.concatenate([[0.0], phi, [0.0]])
    return f.with_values(f.u + dt / h * (phi[1:] - phi[:-1]))


def thinfilm_step_limit(ws: WeightSet, f: GridField, lam: float) -> float:
    """Largest stable thin-film step for the current state (no safety factor).

    The diffusive part scales with max|u|, which bounds the clamped face
    mobility even after the profile dips below zero.
    """
    check_grid(ws, f)
    return _thinfilm_limit(ws, f, apply(ws, f), lam)


def step_thinfilm(ws: WeightSet, f: GridField, dt: float, lam: float) -> GridField:
    """Conservative update with face flux Φ = max(ū, 0)(p_{j+1} - p_j)/h + λ x ū, p = L u."""
    check_grid(ws, f)
    p = apply(ws, f)
    limit = _thinfilm_limit(ws, f, p, lam)
    if dt > limit:
        raise CFLViolation(f"thin-film step dt={dt:g} exceeds the restriction {limit:.6g}")
    return _thinfilm_update(f, p, dt, lam)


# ----------------------------------------------------------------------
# initial data
# ----------------------------------------------------------------------


def sign_data(x: npt.NDArray[np.float64], sign: float = 1.0) -> npt.NDArray[np.float64]:
    return sign * np.sign(x)


def cosine_bump(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """cos x on |x| ≤ π/2, zero elsewhere."""
    return np.where(np.abs(x) <= math.pi / 2.0, np.cos(x), 0.0)


def thinfilm_mass(alpha: float) -> float:
    """Mass √π Γ(2+α/2)/Γ((5+α)/2) of the stationary profile."""
    return math.sqrt(math.pi) * float(special.gamma(2.0 + alpha / 2.0) / special.gamma((5.0 + alpha) / 2.0))


def thinfilm_steady(alpha: float, x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    return np.maximum(1.0 - x**2, 0.0) ** (1.0 + alpha / 2.0)


def thinfilm_initial(alpha: float, x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Two Gaussians scaled by M/√π, M the stationary mass; their own mass is 0.8 M."""
    scale = thinfilm_mass(alpha) / math.sqrt(math.pi)
    return scale * (0.8 * np.exp(-4.0 * (x - 1.0) ** 2) + 1.6 * np.exp(-16.0 * (x + 2.0) ** 2))


def max_slope(f: GridField) -> float:
    """max |Δu/h|, the steepness of a profile."""
    return float(np.max(np.abs(np.diff(f.u)))) / f.h if f.n > 1 else 0.0


# ----------------------------------------------------------------------
# time loop
# ----------------------------------------------------------------------


def _mass(f: GridField) -> float:
    return f.h * float(f.u.sum())


def _advance(config: EvolutionConfig, f: GridField) -> GridField:
    ws = config.ws
    if config.kind == PdeKind.HEAT:
        return step_heat(ws, f, config.dt, config.exterior)
    if config.kind == PdeKind.BURGERS:
        return step_burgers(ws, f, config.dt, config.kappa, config.flux, config.exterior)

    remaining = config.dt
    lam = config.drift
    substeps = 0
    while remaining > 0:
        p = apply(ws, f)
        sub = min(remaining, config.safety * _thinfilm_limit(ws, f, p, lam))
        f = _thinfilm_update(f, p, sub, lam)
        remaining -= sub
        substeps += 1
        if remaining <= 1e-14 * config.dt:
            break
    if substeps > 1:
        logger.debug("thin-film step split into %d sub-steps", substeps)
    return f


def run(config: EvolutionConfig, u0: GridField, snapshot_times: tuple[float, ...] | list[float] = ()) -> EvolutionTrace:
    """Advance ``u0`` to ``config.t_final``, recording the requested snapshots and the final state."""
    check_grid(config.ws, u0)
    schedule = SnapshotSchedule(snapshot_times, config.dt, config.t_final)
    if config.kind == PdeKind.BURGERS:
        speed = max(float(np.max(np.abs(u0.u))), 1e-300)
        if config.dt > config.safety * u0.h / speed:
            raise CFLViolation(
                f"Burgers step dt={config.dt:g} exceeds {config.safety:g}·h/max|u| = {config.safety * u0.h / speed:.6g}"
            )
        combined = config.dt * (speed / u0.h + config.kappa * -config.ws.w0)
        if combined > 1.0:
            logger.warning("Burgers step exceeds the combined monotonicity bound (%.3f > 1)", combined)
    if config.kind == PdeKind.THINFILM and config.dt > thinfilm_step_limit(config.ws, u0, config.drift):
        logger.warning("thin-film dt=%g exceeds the explicit restriction; sub-cycling", config.dt)

    times = [0.0]
    fields = [u0]
    masses = [_mass(u0)]
    ceiling = _DIVERGENCE_FACTOR * max(float(np.max(np.abs(u0.u))), 1e-300)
    f = u0
    for step in range(1, schedule.total_steps + 1):
        f = _advance(config, f)
        peak = float(np.max(np.abs(f.u)))
        if not math.isfinite(peak) or peak > ceiling:
            raise NumericalError(f"{config.kind} run diverged at t={step * config.dt:g} (max|u| = {peak:.3g})")
        for t in schedule.due(step):
            if t > times[-1]:
                times.append(t)
                fields.append(f)
                masses.append(_mass(f))
                logger.info("%s snapshot t=%g max|u|=%.4g", config.kind, t, peak)
    if fields[-1] is not f:
        times.append(schedule.total_steps * config.dt)
        fields.append(f)
        masses.append(_mass(f))
    for t in schedule.due(0):
        if t > 0:
            times.insert(1, t)
            fields.insert(1, u0)
            masses.insert(1, masses[0])
    return EvolutionTrace(times=tuple(times), fields=tuple(fields), masses=tuple(masses))
