"""Time-dependent runs: fractional heat, fractal Burgers, thin film.

One command per PDE kind, all sharing the ``evolve`` config section.
Snapshots are written as ``t,x,u`` rows, one block per snapshot time,
starting with the initial data.

Exterior handling follows the initial data. Data that vanish at the
window edges are extended by zero. Otherwise the edge values become
far-field constants; with ``far_field.enabled`` the exterior instead
relaxes towards them algebraically (β defaults to α, the decay of the
heat flow of a step).
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass

import numpy as np
import trio

from core.commands import Command, CommandContext, CommandHandler, CommandRegistry
from core.context import RunContext
from core.errors import ConfigError
from core.evolve import (
    EvolutionConfig,
    EvolutionTrace,
    FluxKind,
    PdeKind,
    cosine_bump,
    max_slope,
    run,
    sign_data,
    thinfilm_initial,
)
from core.models import ZERO_EXTERIOR, ConstantExterior, Exterior, GridField, TailSpec
from core.weights import make_weights
from experiments.apply import far_field_truncation

logger = logging.getLogger(__name__)

SNAPSHOT_HEADER = ("t", "x", "u")
THINFILM_DT = 1e-4
_EDGE_TOL = 1e-14


def initial_field(name: str, alpha: float, h: float, L: float) -> GridField:
    if name == "sign":
        return GridField.sample(sign_data, h, -L, L)
    if name == "minus_sign":
        return GridField.sample(lambda x: sign_data(x, -1.0), h, -L, L)
    if name == "cosine":
        return GridField.sample(cosine_bump, h, -L, L)
    if name == "thinfilm":
        return GridField.sample(lambda x: thinfilm_initial(alpha, x), h, -L, L)
    raise ConfigError(f"unknown initial data {name!r} (expected sign, minus_sign, cosine or thinfilm)")


def exterior_for(
    kind: PdeKind,
    u0: GridField,
    *,
    far_field: bool = False,
    beta: float = 1.0,
    L_M: float | None = None,
) -> Exterior:
    """Exterior policy matching the edge values of ``u0``."""
    left, right = float(u0.u[0]), float(u0.u[-1])
    if kind == PdeKind.THINFILM:
        if max(abs(left), abs(right)) > _EDGE_TOL:
            raise ConfigError("thin-film data must vanish at the window edges")
        return ZERO_EXTERIOR
    if max(abs(left), abs(right)) <= _EDGE_TOL:
        return ZERO_EXTERIOR
    if not far_field:
        return ConstantExterior(left=left, right=right)
    edge = float(u0.x[-1])
    return TailSpec(
        beta=beta,
        L=edge,
        L_M=3.0 * edge if L_M is None else L_M,
        offset_left=left,
        offset_right=right,
    )


def default_dt(kind: PdeKind, alpha: float, h: float, kappa: float, u0: GridField) -> float:
    if kind == PdeKind.THINFILM:
        return THINFILM_DT
    dt = 0.1 * h**alpha
    if kind == PdeKind.BURGERS:
        if kappa > 0:
            dt /= kappa
        speed = float(np.max(np.abs(u0.u)))
        if speed > 0:
            dt = min(dt, 0.5 * h / speed)
    return dt


def parse_snapshots(raw: str | list[float] | None, t_final: float) -> list[float]:
    if raw is None or raw == "" or raw == []:
        return [t_final]
    if isinstance(raw, str):
        try:
            return [float(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"snapshot times must be comma-separated numbers, got {raw!r}") from None
    return [float(v) for v in raw]


def build_config(run_ctx: RunContext, kind: PdeKind, args: argparse.Namespace) -> tuple[EvolutionConfig, GridField, list[float]]:
    settings = run_ctx.section("evolve")
    family, alpha, h, L = run_ctx.family, run_ctx.alpha, run_ctx.h, run_ctx.L
    initial = getattr(args, "initial", None) or settings.get("initial")
    if initial is None:
        initial = "thinfilm" if kind == PdeKind.THINFILM else "sign"
    u0 = initial_field(str(initial), alpha, h, L)

    far_field = run_ctx.far_field_enabled
    beta = run_ctx.beta if run_ctx.beta is not None else alpha
    exterior = exterior_for(kind, u0, far_field=far_field, beta=beta, L_M=run_ctx.L_M)
    if isinstance(exterior, TailSpec):
        m = max(run_ctx.truncation(0), far_field_truncation(L, exterior.L_M, h))
    else:
        m = run_ctx.truncation()
    ws = make_weights(family, alpha, h, m)

    kappa = run_ctx.number("evolve", "kappa")
    dt = run_ctx.optional_number("evolve", "dt")
    if dt is None:
        dt = default_dt(kind, alpha, h, kappa, u0)
    t_final = run_ctx.number("evolve", "t_final")
    try:
        flux = FluxKind(str(settings.get("flux", "godunov")))
    except ValueError:
        raise ConfigError(f"evolve.flux must be godunov or lax-friedrichs, got {settings.get('flux')!r}") from None
    config = EvolutionConfig(
        kind=kind,
        ws=ws,
        dt=dt,
        t_final=t_final,
        kappa=kappa,
        lam=run_ctx.optional_number("evolve", "lambda"),
        exterior=exterior,
        flux=flux,
        u_max=float(np.max(np.abs(u0.u))) if kind == PdeKind.BURGERS else None,
    )
    return config, u0, parse_snapshots(settings.get("snapshots"), t_final)


def snapshot_rows(trace: EvolutionTrace) -> list[tuple[float, float, float]]:
    rows: list[tuple[float, float, float]] = []
    for t, f in zip(trace.times, trace.fields, strict=True):
        rows.extend((t, float(x), float(u)) for x, u in zip(f.x, f.u, strict=True))
    return rows


@dataclass
class PdeExperiment:
    """Registers ``heat``, ``burgers`` and ``thinfilm``."""

    def register(self, registry: CommandRegistry) -> None:
        usages = {
            PdeKind.HEAT: (
                "explicit Euler run of the fractional heat equation",
                "fraclap heat --family PER --alpha 0.5 --h 0.1 --L 10 --dt 0.01 --tfinal 0.5 [--far-field]",
            ),
            PdeKind.BURGERS: (
                "fractal Burgers equation with a Godunov or Lax-Friedrichs flux",
                "fraclap burgers --alpha 1.2 --kappa 1 --h 0.05 --tfinal 2 "
                "[--initial sign|minus_sign|cosine] [--flux lax-friedrichs]",
            ),
            PdeKind.THINFILM: (
                "fractional thin-film equation in similarity variables",
                "fraclap thinfilm --family Q --alpha 1 --h 0.01 --L 4 --tfinal 0.4 --snapshots 0.05,0.1,0.2,0.4",
            ),
        }
        for kind, (summary, usage) in usages.items():
            registry.register(
                Command(
                    name=str(kind),
                    summary=summary,
                    usage=usage,
                    handler=self._handler(kind),
                    configure=self._configure,
                )
            )

    @staticmethod
    def _configure(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--initial", default=None, help="initial data: sign, minus_sign, cosine or thinfilm")

    def _handler(self, kind: PdeKind) -> CommandHandler:
        async def handle(ctx: CommandContext) -> None:
            config, u0, snapshots = build_config(ctx.run, kind, ctx.args)
            logger.info(
                "%s run: %s alpha=%g h=%g dt=%g t_final=%g",
                kind,
                config.ws.family,
                config.ws.alpha,
                u0.h,
                config.dt,
                config.t_final,
            )
            trace = await trio.to_thread.run_sync(run, config, u0, snapshots)
            logger.info(
                "%s finished: mass change %.3e, max slope %.4g",
                kind,
                trace.masses[-1] - trace.masses[0],
                max_slope(trace.final),
            )
            ctx.run.emit(SNAPSHOT_HEADER, snapshot_rows(trace))

        return handle
