"""Identity and inequality suite for the discrete operator.

Every check draws seeded random fields supported in the middle of a
window padded with zeros, so the zero exterior is exact and the window
sums are the full lattice sums. Weights are truncated at the window
length, which makes every interaction inside the window visible.

Equalities report a relative gap (self-adjointness, Parseval, energy,
fast path); inequalities report the worst margin normalised by the size
of the terms (energy sign, Córdoba, Stroock–Varopoulos). The inequality
checks only run for families whose weights are nonnegative.
"""

from __future__ import annotations

import argparse
import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from core.commands import Command, CommandContext, CommandRegistry
from core.errors import DomainError, NumericalError
from core.models import GridField, WeightFamily, WeightSet, parse_family
from core.operator import apply_direct, apply_fast, energy
from core.sweep import SweepRunner
from core.symbol import semi_discrete_fourier
from core.weights import check_alpha, is_nonnegative, make_weights

logger = logging.getLogger(__name__)

SELFTEST_HEADER = ("identity", "family", "alpha", "p", "trials", "worst", "tolerance", "passed")

SELFTEST_H = 0.0625
SUPPORT = 48
PADDING = 24
PARSEVAL_POINTS = 4096
CORDOBA_POWERS = (2.0, 3.0, 4.0)
STROOCK_VAROPOULOS_POWERS = (3.0, 4.0, 6.0)

TOLERANCES = {
    "self_adjoint": 1e-11,
    "parseval": 1e-8,
    "energy": 1e-10,
    "energy_sign": 1e-12,
    "cordoba": 1e-12,
    "stroock_varopoulos": 1e-12,
    "fast_path": 1e-11,
}
# Equalities pass when the gap is below tolerance, inequalities when the margin is above -tolerance.
_EQUALITIES = frozenset({"self_adjoint", "parseval", "energy", "fast_path"})


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    family: str
    alpha: float
    p: float | None
    trials: int
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        if self.identity in _EQUALITIES:
            return self.worst <= self.tolerance
        return self.worst >= -self.tolerance

    def row(self) -> tuple[str, str, float, float | None, int, float, float, bool]:
        return (self.identity, self.family, self.alpha, self.p, self.trials, self.worst, self.tolerance, self.passed)


def random_field(rng: np.random.Generator, h: float = SELFTEST_H) -> GridField:
    """Uniform values in [-1, 1] on SUPPORT points, PADDING zeros either side."""
    n = SUPPORT + 2 * PADDING
    u = np.zeros(n)
    u[PADDING : PADDING + SUPPORT] = rng.uniform(-1.0, 1.0, SUPPORT)
    return GridField(h=h, j0=-(n // 2), u=u)


def _inner(f: GridField, a: npt.NDArray[np.float64], b: npt.NDArray[np.float64]) -> float:
    return f.h * float(np.dot(a, b))


def _lap(ws: WeightSet, f: GridField) -> npt.NDArray[np.float64]:
    return apply_direct(ws, f)


def self_adjoint_gap(ws: WeightSet, u: GridField, v: GridField) -> float:
    lu, lv = _lap(ws, u), _lap(ws, v)
    gap = abs(_inner(u, lu, v.u) - _inner(u, u.u, lv))
    scale = u.h * (np.linalg.norm(lu) * np.linalg.norm(v.u) + np.linalg.norm(u.u) * np.linalg.norm(lv))
    return gap / max(float(scale), 1e-300)


def parseval_gap(u: GridField, points: int = PARSEVAL_POINTS) -> float:
    """Relative gap between h Σ u² and (1/2π) ∫ |û|² over [-π/h, π/h].

    The periodic trapezoid on ``points`` nodes is exact for windows shorter
    than ``points``.
    """
    if u.n >= points:
        raise DomainError(f"Parseval check needs fewer than {points} samples, got {u.n}")
    span = 2.0 * math.pi / u.h
    xi = -math.pi / u.h + span * np.arange(points) / points
    spectral = span / points * float(np.sum(np.abs(semi_discrete_fourier(u, xi)) ** 2)) / (2.0 * math.pi)
    physical = u.h * float(np.dot(u.u, u.u))
    return abs(physical - spectral) / max(physical, 1e-300)


def energy_gap(ws: WeightSet, u: GridField) -> float:
    e = energy(ws, u)
    half = 0.5 * _inner(u, _lap(ws, u), u.u)
    return abs(e - half) / max(abs(half), 1e-300)


def energy_margin(ws: WeightSet, u: GridField) -> float:
    scale = u.h * -ws.w0 * float(np.dot(u.u, u.u))
    return energy(ws, u) / max(scale, 1e-300)


def cordoba_margin(ws: WeightSet, u: GridField, p: float) -> float:
    """min_j |u_j|^{p-2} u_j (L u)_j - (1/p) (L |u|^p)_j, relative to the term sizes."""
    a = np.abs(u.u)
    lhs = a ** (p - 2.0) * u.u * _lap(ws, u)
    rhs = _lap(ws, u.with_values(a**p)) / p
    scale = -ws.w0 * float(np.max(a)) ** p
    return float(np.min(lhs - rhs)) / max(scale, 1e-300)


def stroock_varopoulos_margin(ws: WeightSet, u: GridField, p: float) -> float:
    """⟨|u|^{p-2}u, L u⟩ - (2/p)⟨|u|^{p/2}, L |u|^{p/2}⟩, relative to the first term's size."""
    a = np.abs(u.u)
    left = _inner(u, a ** (p - 2.0) * u.u, _lap(ws, u))
    half = a ** (p / 2.0)
    right = 2.0 / p * _inner(u, half, _lap(ws, u.with_values(half)))
    scale = u.h * -ws.w0 * float(np.sum(a**p))
    return (left - right) / max(scale, 1e-300)


def fast_path_gap(ws: WeightSet, u: GridField) -> float:
    direct = apply_direct(ws, u)
    gap = float(np.max(np.abs(apply_fast(ws, u) - direct)))
    return gap / max(float(np.max(np.abs(direct))), 1.0)


def check_family(family: WeightFamily, alpha: float, seed: int, trials: int) -> list[IdentityResult]:
    """Run the whole suite for one family and α on ``trials`` random draws."""
    rng = np.random.default_rng([seed, list(WeightFamily).index(family), round(alpha * 1000)])
    ws = make_weights(family, alpha, SELFTEST_H, SUPPORT + 2 * PADDING)
    nonnegative = is_nonnegative(ws)

    worst: dict[tuple[str, float | None], float] = {}

    def record(name: str, p: float | None, value: float) -> None:
        key = (name, p)
        if name in _EQUALITIES:
            worst[key] = max(worst.get(key, -math.inf), value)
        else:
            worst[key] = min(worst.get(key, math.inf), value)

    for _ in range(trials):
        u, v = random_field(rng), random_field(rng)
        record("self_adjoint", None, self_adjoint_gap(ws, u, v))
        record("parseval", None, parseval_gap(u))
        record("energy", None, energy_gap(ws, u))
        record("fast_path", None, fast_path_gap(ws, u))
        if not nonnegative:
            continue
        record("energy_sign", None, energy_margin(ws, u))
        for p in CORDOBA_POWERS:
            record("cordoba", p, cordoba_margin(ws, u, p))
        for p in STROOCK_VAROPOULOS_POWERS:
            record("stroock_varopoulos", p, stroock_varopoulos_margin(ws, u, p))

    return [
        IdentityResult(
            identity=name,
            family=str(family),
            alpha=alpha,
            p=p,
            trials=trials,
            worst=value,
            tolerance=TOLERANCES[name],
        )
        for (name, p), value in worst.items()
    ]


def _admissible(family: WeightFamily, alpha: float) -> bool:
    try:
        check_alpha(family, alpha)
    except DomainError:
        return False
    return True


async def run_suite(
    families: tuple[WeightFamily, ...],
    alphas: tuple[float, ...],
    *,
    seed: int = 0,
    trials: int = 100,
    workers: int = 4,
) -> list[IdentityResult]:
    runner: SweepRunner[list[IdentityResult]] = SweepRunner(workers=workers)
    for family in families:
        for alpha in alphas:
            if not _admissible(family, alpha):
                logger.info("skipping %s at alpha=%g", family, alpha)
                continue
            runner.register(
                f"selftest {family} alpha={alpha:g}",
                lambda family=family, alpha=alpha: check_family(family, alpha, seed, trials),
            )
    return [result for batch in await runner.run() for result in batch]


@dataclass
class SelftestExperiment:
    """Registers the ``selftest`` command."""

    def register(self, registry: CommandRegistry) -> None:
        registry.register(
            Command(
                name="selftest",
                summary="run the identity and inequality suite on seeded random fields",
                usage=(
                    "fraclap selftest [--seed 0] [--trials 100] [--workers 4]\n"
                    "Families and alpha values come from selftest.families and selftest.alphas."
                ),
                handler=self._handle_selftest,
                configure=self._configure_selftest,
            )
        )

    @staticmethod
    def _configure_selftest(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--trials", type=int, default=None, help="random fields per check")

    async def _handle_selftest(self, ctx: CommandContext) -> None:
        run = ctx.run
        settings = run.section("selftest")
        families = tuple(parse_family(str(f)) for f in settings.get("families") or [f.value for f in WeightFamily])
        alphas = tuple(float(a) for a in settings.get("alphas") or [0.4, 1.0, 1.6])
        seed = int(run.number("selftest", "seed"))
        trials = ctx.args.trials if ctx.args.trials is not None else int(run.number("selftest", "trials"))
        results = await run_suite(families, alphas, seed=seed, trials=trials, workers=run.workers)
        run.emit(SELFTEST_HEADER, [r.row() for r in results])
        failed = [r for r in results if not r.passed]
        logger.info("selftest: %d of %d checks passed", len(results) - len(failed), len(results))
        if failed:
            names = ", ".join(f"{r.identity}[{r.family}, alpha={r.alpha:g}]" for r in failed)
            raise NumericalError(f"selftest failed: {names}")
