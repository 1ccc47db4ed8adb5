"""Extended Dirichlet problem for the discrete fractional Laplacian.

Find u on the interior grid points of (-a, a) with

    (-Δ_h)^{α/2} u_j = f_j   for |x_j| < a,
    u_j = g(x_j)            for |x_j| ≥ a.

Exterior data is prescribed on the whole complement, so every exterior
sample the weights can reach moves to the right-hand side and the
interior block is the symmetric Toeplitz matrix with first column
-w_0, -w_1, ..., -w_{N-1}. Nonnegative weights make it an M-matrix.

The dense solve targets interior sizes up to a few thousand points.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import linalg

from core.errors import GridMismatchError, NumericalError
from core.models import GridField, TailSpec, WeightFamily, WeightSet
from core.operator import apply_direct, tail_correction
from core.oracle import v_g
from core.weights import is_nonnegative, make_weights

logger = logging.getLogger(__name__)

Data = Callable[[npt.NDArray[np.float64]], npt.ArrayLike]

_RESIDUAL_TOL = 1e-10
_PRINCIPLE_TOL = 1e-10


def cells_per_halfwidth(halfwidth: float, h: float) -> int:
    """a/h as an integer, so that ±a are grid points."""
    ratio = halfwidth / h
    count = round(ratio)
    if count < 1 or not math.isclose(ratio, count, rel_tol=0.0, abs_tol=1e-9 * max(1.0, ratio)):
        raise GridMismatchError(f"halfwidth {halfwidth} is not an integer multiple of h={h}")
    return int(count)


@dataclass(frozen=True)
class DirichletProblem:
    """Right-hand side ``f`` on the interior and exterior data ``g``.

    ``g`` is sampled at every exterior grid point within reach of the
    weights (and within ``L_M`` when given); ``g_tail`` integrates an
    algebraic far field of g beyond ``L_M`` in closed form.
    """

    ws: WeightSet
    f: GridField
    halfwidth: float = 1.0
    g: Data | None = None
    g_tail: TailSpec | None = None
    L_M: float | None = None

    def __post_init__(self) -> None:
        count = cells_per_halfwidth(self.halfwidth, self.ws.h)
        if not math.isclose(self.f.h, self.ws.h, rel_tol=1e-12):
            raise GridMismatchError("right-hand side and weights use different grids")
        if self.f.j0 != 1 - count or self.f.n != 2 * count - 1:
            raise GridMismatchError(
                f"right-hand side must cover interior indices {1 - count}..{count - 1}"
            )
        if self.g_tail is not None and self.L_M is None:
            raise GridMismatchError("an algebraic exterior tail needs the sampling radius L_M")

    @classmethod
    def from_functions(
        cls,
        ws: WeightSet,
        f: Data,
        g: Data | None = None,
        halfwidth: float = 1.0,
        g_tail: TailSpec | None = None,
        L_M: float | None = None,
    ) -> DirichletProblem:
        count = cells_per_halfwidth(halfwidth, ws.h)
        x = np.arange(1 - count, count) * ws.h
        field = GridField(h=ws.h, j0=1 - count, u=np.broadcast_to(np.asarray(f(x), dtype=float), x.shape))
        return cls(ws=ws, f=field, halfwidth=halfwidth, g=g, g_tail=g_tail, L_M=L_M)

    @property
    def interior_count(self) -> int:
        return self.f.n


@dataclass(frozen=True, eq=False)
class LinearSystem:
    matrix: npt.NDArray[np.float64]
    rhs: npt.NDArray[np.float64]
    x: npt.NDArray[np.float64]


def _exterior_indices(p: DirichletProblem) -> npt.NDArray[np.int64]:
    count = cells_per_halfwidth(p.halfwidth, p.ws.h)
    reach = count - 1 + p.ws.m
    if p.L_M is not None:
        reach = min(reach, int(math.floor(p.L_M / p.ws.h + 1e-9)))
    right = np.arange(count, reach + 1)
    return np.concatenate([-right[::-1], right])


def assemble(p: DirichletProblem) -> LinearSystem:
    ws = p.ws
    n = p.interior_count
    column = np.zeros(n)
    reach = min(n - 1, ws.m)
    column[0] = -ws.w0
    column[1 : reach + 1] = -ws.w[1 : reach + 1]
    matrix = linalg.toeplitz(column)

    rhs = p.f.u.copy()
    interior = p.f.indices
    if p.g is not None:
        ext = _exterior_indices(p)
        if ext.size:
            g_values = np.broadcast_to(np.asarray(p.g(ext * ws.h), dtype=float), ext.shape)
            gap = np.abs(interior[:, None] - ext[None, :])
            coupling = np.where(gap <= ws.m, ws.w[np.minimum(gap, ws.m)], 0.0)
            rhs += coupling @ g_values
    if p.g_tail is not None:
        rhs -= tail_correction(ws.alpha, p.g_tail, p.f.x, np.zeros(n))
    return LinearSystem(matrix=matrix, rhs=rhs, x=p.f.x.copy())


def solve(p: DirichletProblem) -> GridField:
    """Interior values of the discrete solution."""
    if p.ws.family == WeightFamily.SP and p.ws.alpha > 1.0:
        logger.warning("SP weights alternate in sign for alpha > 1; the maximum principle does not apply")
    system = assemble(p)
    try:
        u = linalg.solve(system.matrix, system.rhs, assume_a="sym")
    except linalg.LinAlgError as exc:
        raise NumericalError(f"Dirichlet matrix is singular: {exc}") from exc
    scale = max(float(np.linalg.norm(system.rhs)), 1e-300)
    residual = float(np.linalg.norm(system.matrix @ u - system.rhs)) / scale
    if residual > _RESIDUAL_TOL and np.any(system.rhs):
        raise NumericalError(f"Dirichlet solve residual {residual:.3e} above {_RESIDUAL_TOL:g}")
    logger.debug("Dirichlet solve N=%d relative residual %.3e", p.interior_count, residual)
    return p.f.with_values(u)


def check_max_principle(ws: WeightSet, u: GridField, interior: range) -> bool:
    """Verdict of the discrete maximum (and minimum) principle on ``interior``.

    Samples outside ``interior`` form the exterior; samples beyond the
    window count as 0. Where the hypothesis L u ≤ 0 (L u ≥ 0) fails the
    corresponding implication holds vacuously.
    """
    lu = apply_direct(ws, u, interior)
    inside = np.isin(u.indices, np.arange(interior.start, interior.stop))
    outside = np.append(u.u[~inside], 0.0)
    values = u.u[inside]
    scale = max(1.0, float(np.max(np.abs(u.u))))
    tol = _PRINCIPLE_TOL * scale * max(1.0, -ws.w0)

    ok = True
    if np.all(lu <= tol):
        ok &= bool(values.max() <= outside.max() + _PRINCIPLE_TOL * scale)
    if np.all(lu >= -tol):
        ok &= bool(values.min() >= outside.min() - _PRINCIPLE_TOL * scale)
    return ok


def check_supersolution_vG(family: WeightFamily, alpha: float, h: float) -> tuple[bool, float]:
    """Whether (-Δ_h)^{α/2} v_G ≥ 1 on the interior of (-1, 1), with the minimum."""
    count = cells_per_halfwidth(1.0, h)
    ws = make_weights(family, alpha, h, 2 * count)
    field = GridField(h=h, j0=-count, u=v_g(alpha, np.arange(-count, count + 1) * h))
    values = apply_direct(ws, field, range(1 - count, count))
    lowest = float(values.min())
    if lowest < 1.0 - 1e-12:
        where = (int(np.argmin(values)) + 1 - count) * h
        logger.info("%s alpha=%g h=%g: L_h v_G dips to %.6f at x=%g", family, alpha, h, lowest, where)
    if not is_nonnegative(ws):
        logger.info("%s weights at alpha=%g have negative entries; verdict is numerical only", family, alpha)
    return lowest >= 1.0 - 1e-12, lowest
