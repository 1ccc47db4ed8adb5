"""Apply the discrete operator to an oracle function.

The field is the oracle sampled on [-L, L]; the output compares the
discrete operator with the closed-form fractional Laplacian. With
``far_field.enabled`` the exterior is the algebraic asymptote of the
field (decay exponent from ``far_field.beta`` or fitted from the outer
10% of the window) and the closed-form far-field integrals are added;
otherwise the field is extended by zero.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import trio

from core.commands import Command, CommandContext, CommandRegistry
from core.errors import ConfigError
from core.models import GridField, TailSpec, WeightFamily
from core.operator import apply, apply_truncated, estimate_decay_exponent
from core.oracle import (
    OracleKind,
    beta_bump,
    flap_beta_bump,
    flap_gaussian,
    flap_lorentzian,
    lorentzian,
    parse_oracle,
)
from core.weights import make_weights

logger = logging.getLogger(__name__)

APPLY_HEADER = ("x", "u", "flap_u", "flap_exact", "abs_err")

Function = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


def oracle_pair(oracle: str, alpha: float) -> tuple[Function, Function]:
    """(u, (-Δ)^{α/2} u) for a static oracle name."""
    kind, k = parse_oracle(oracle)
    if kind == OracleKind.GAUSSIAN0:
        return (lambda x: np.exp(-(x**2))), (lambda x: flap_gaussian(alpha, x))
    if kind == OracleKind.LORENTZIAN:
        return (lambda x: lorentzian(alpha, x)), (lambda x: flap_lorentzian(alpha, x))
    if kind == OracleKind.BETA_BUMP:
        return (lambda x: beta_bump(k, alpha, x)), (lambda x: _bump_exact(k, alpha, x))
    raise ConfigError(f"{oracle} is time dependent; run it through the heat command")


def _bump_exact(k: int, alpha: float, x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    # The outer series is not evaluated just outside the support.
    out = np.full(x.shape, np.nan)
    ax = np.abs(x)
    ok = (ax < 1.0) | (ax**-2.0 <= 0.9)
    out[ok] = flap_beta_bump(k, alpha, x[ok])
    return out


def far_field_truncation(L: float, L_M: float, h: float) -> int:
    """Smallest m with which the truncated sum reaches L_M from either window edge."""
    return round(L / h) + int(math.floor(L_M / h - 0.5))


@dataclass(frozen=True, eq=False)
class OracleEvaluation:
    field: GridField
    flap: npt.NDArray[np.float64]
    exact: npt.NDArray[np.float64]

    @property
    def abs_err(self) -> npt.NDArray[np.float64]:
        return np.abs(self.flap - self.exact)

    @property
    def sup_error(self) -> float:
        return float(np.nanmax(self.abs_err))

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        err = self.abs_err
        return [
            (float(x), float(u), float(f), float(e), float(d))
            for x, u, f, e, d in zip(self.field.x, self.field.u, self.flap, self.exact, err, strict=True)
        ]


def evaluate_oracle(
    family: WeightFamily,
    alpha: float,
    h: float,
    L: float,
    oracle: str,
    *,
    m: int | None = None,
    far_field: bool = False,
    beta: float | None = None,
    L_M: float | None = None,
) -> OracleEvaluation:
    u_fn, flap_fn = oracle_pair(oracle, alpha)
    field = GridField.sample(u_fn, h, -L, L)
    if far_field:
        radius = 3.0 * L if L_M is None else L_M
        needed = far_field_truncation(L, radius, h)
        ws = make_weights(family, alpha, h, max(m or 0, needed))
        decay = estimate_decay_exponent(field) if beta is None else beta
        tail = TailSpec(beta=decay, L=L, L_M=radius)
        logger.debug("far field beta=%.4f L_M=%g m=%d", decay, radius, ws.m)
        flap = apply_truncated(ws, field, tail)
    else:
        ws = make_weights(family, alpha, h, m if m is not None else 2 * round(L / h))
        flap = apply(ws, field)
    return OracleEvaluation(field=field, flap=flap, exact=flap_fn(field.x))


@dataclass
class ApplyExperiment:
    """Registers the ``apply`` command."""

    def register(self, registry: CommandRegistry) -> None:
        registry.register(
            Command(
                name="apply",
                summary="apply the operator to an oracle function and compare",
                usage=(
                    "fraclap apply --oracle gaussian0|lorentzian|beta_bump:k --family T --alpha 0.8 --h 0.0625\n"
                    "Add --far-field (optionally --beta, --LM) for the algebraic exterior."
                ),
                handler=self._handle_apply,
            )
        )

    async def _handle_apply(self, ctx: CommandContext) -> None:
        run = ctx.run
        oracle = str(run.section("apply").get("oracle", "gaussian0"))
        result = await trio.to_thread.run_sync(
            lambda: evaluate_oracle(
                run.family,
                run.alpha,
                run.h,
                run.L,
                oracle,
                m=run.m,
                far_field=run.far_field_enabled,
                beta=run.beta,
                L_M=run.L_M,
            )
        )
        logger.info("%s %s alpha=%g h=%g: sup error %.6e", oracle, run.family, run.alpha, run.h, result.sup_error)
        run.emit(APPLY_HEADER, result.rows())
