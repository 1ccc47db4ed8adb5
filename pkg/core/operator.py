"""Application of the discrete fractional Laplacian to grid fields.

With the convention w_0 = -Σ_{k≠0} w_k the scheme becomes a convolution,

    (-Δ_h)^{α/2} u_j = -w_0 u_j - Σ_{1≤|k|≤m} w_k u_{j-k} - (far field),

where samples outside the window come from an exterior policy:

* :class:`~core.models.ZeroExterior`: u = 0 outside.
* :class:`~core.models.ConstantExterior`: u = c± outside. Past distance m
  the far-field term is c± times the stored weight tail, so constants are
  annihilated exactly.
* :class:`~core.models.TailSpec`: algebraic decay towards c±. The direct
  and fast paths fill exterior samples from the asymptote; the truncated
  path keeps samples up to L_M and integrates the rest in closed form.

Every function checks that the field and the weights share h.
"""

from __future__ import annotations

import logging
import math
from dataclasses import replace

import numpy as np
import numpy.typing as npt
from scipy import fft

from core.errors import DomainError, GridMismatchError, NumericalError
from core.models import (
    ZERO_EXTERIOR,
    ConstantExterior,
    Exterior,
    GridField,
    TailSpec,
    WeightSet,
)
from core.specfun import gauss_2f1, riesz_constant

logger = logging.getLogger(__name__)

# Above this many multiply-adds :func:`apply` switches to the FFT path.
_DIRECT_WORK_LIMIT = 1 << 18


def check_grid(ws: WeightSet, f: GridField) -> None:
    if not math.isclose(ws.h, f.h, rel_tol=1e-12):
        raise GridMismatchError(f"weights built for h={ws.h} applied to a field with h={f.h}")


def far_field(exterior: Exterior) -> tuple[float, float]:
    """Limits of u at -∞ and +∞ under an exterior policy."""
    if isinstance(exterior, ConstantExterior):
        return exterior.left, exterior.right
    if isinstance(exterior, TailSpec):
        return exterior.offset_left, exterior.offset_right
    return 0.0, 0.0


def exterior_values(exterior: Exterior, f: GridField, x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Exterior samples at positions ``x`` outside the window of ``f``."""
    if isinstance(exterior, TailSpec):
        return exterior.with_edges(f.u[0], f.u[-1]).values(x)
    return exterior.values(x)


def _extended(ws: WeightSet, f: GridField, exterior: Exterior) -> npt.NDArray[np.float64]:
    """Samples at global indices j0-m .. j0+N-1+m."""
    m = ws.m
    left_x = (f.j0 - m + np.arange(m)) * f.h
    right_x = (f.j0 + f.n + np.arange(m)) * f.h
    return np.concatenate(
        [exterior_values(exterior, f, left_x), f.u, exterior_values(exterior, f, right_x)]
    )


def _far_term(ws: WeightSet, exterior: Exterior) -> float:
    left, right = far_field(exterior)
    return (left + right) * ws.tail / ws.h**ws.alpha


def _resolve_range(f: GridField, indices: range | None) -> npt.NDArray[np.int64]:
    if indices is None:
        return np.arange(f.n)
    if indices.step != 1 or len(indices) == 0:
        raise GridMismatchError("output range must be a non-empty contiguous index range")
    if indices.start < f.j0 or indices.stop > f.j0 + f.n:
        raise GridMismatchError(
            f"output range [{indices.start}, {indices.stop}) leaves the window "
            f"[{f.j0}, {f.j0 + f.n})"
        )
    return np.arange(indices.start, indices.stop) - f.j0


def apply_direct(
    ws: WeightSet,
    f: GridField,
    indices: range | None = None,
    exterior: Exterior = ZERO_EXTERIOR,
) -> npt.NDArray[np.float64]:
    """Direct summation over |k| ≤ m at the global grid indices ``indices``."""
    check_grid(ws, f)
    local = _resolve_range(f, indices)
    ext = _extended(ws, f, exterior)
    centre = local + ws.m
    out = -ws.w0 * f.u[local]
    for k in range(1, ws.m + 1):
        out -= ws.w[k] * (ext[centre - k] + ext[centre + k])
    return out - _far_term(ws, exterior)


def _correlate(kernel: npt.NDArray[np.float64], ext: npt.NDArray[np.float64], n_out: int) -> npt.NDArray[np.float64]:
    """Valid part of the convolution of ``ext`` with a symmetric ``kernel``."""
    size = ext.size + kernel.size - 1
    padded = 1 << (size - 1).bit_length()
    product = fft.rfft(ext, padded) * fft.rfft(kernel, padded)
    full = fft.irfft(product, padded)
    start = kernel.size - 1
    return full[start : start + n_out]


def apply_fast(ws: WeightSet, f: GridField, exterior: Exterior = ZERO_EXTERIOR) -> npt.NDArray[np.float64]:
    """Same result as :func:`apply_direct` over the full window, through one FFT convolution."""
    check_grid(ws, f)
    kernel = ws.symmetric().copy()
    kernel[ws.m] = 0.0
    ext = _extended(ws, f, exterior)
    return -ws.w0 * f.u - _correlate(kernel, ext, f.n) - _far_term(ws, exterior)


def apply(ws: WeightSet, f: GridField, exterior: Exterior = ZERO_EXTERIOR) -> npt.NDArray[np.float64]:
    """Apply the scheme under an exterior policy, picking the cheapest exact path."""
    if isinstance(exterior, TailSpec):
        return apply_truncated(ws, f, exterior)
    if f.n * ws.m > _DIRECT_WORK_LIMIT:
        return apply_fast(ws, f, exterior)
    return apply_direct(ws, f, exterior=exterior)


def energy(ws: WeightSet, f: GridField) -> float:
    """E[u] = (h/4) Σ_j Σ_k |u_j - u_{j-k}|² w_k with u = 0 outside the window."""
    check_grid(ws, f)
    u = f.u
    lags = min(ws.m, f.n - 1)
    auto = np.correlate(u, u, mode="full")[f.n : f.n + lags]
    cross = 2.0 * float(np.dot(ws.w[1 : lags + 1], auto))
    return 0.5 * f.h * (-ws.w0 * float(np.dot(u, u)) - cross)


def tail_correction(alpha: float, tail: TailSpec, x: npt.ArrayLike, u: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Far-field part ∫_{|y|>L_M} (u_j - u(y)) C_{1,α}|x_j - y|^{-1-α} dy.

    The first term integrates u_j against the kernel, the second the
    algebraic asymptote c± + (u(±L) - c±)(L/|y|)^β.
    """
    xs = np.asarray(x, dtype=float)
    uj = np.asarray(u, dtype=float)
    if np.any(np.abs(xs) > tail.L * (1.0 + 1e-12)):
        raise DomainError("tail correction is only defined inside the window [-L, L]")
    c = riesz_constant(alpha)
    L, LM, beta = tail.L, tail.L_M, tail.beta
    right_gap = (LM - xs) ** (-alpha) / alpha
    left_gap = (LM + xs) ** (-alpha) / alpha
    inner = c * uj * (right_gap + left_gap)

    s = alpha + beta
    scale = c * L**beta / (s * LM**s)
    right = (tail.u_right - tail.offset_right) * gauss_2f1(alpha + 1.0, s, s + 1.0, xs / LM)
    left = (tail.u_left - tail.offset_left) * gauss_2f1(alpha + 1.0, s, s + 1.0, -xs / LM)
    outer = scale * (right + left) + c * (tail.offset_right * right_gap + tail.offset_left * left_gap)
    return inner - outer


def apply_truncated(ws: WeightSet, f: GridField, tail: TailSpec) -> npt.NDArray[np.float64]:
    """Finite sum over |y| ≤ L_M plus the closed-form far field.

    Exterior samples inside [-L_M, L_M] come from the asymptote anchored at
    the window edges. The extension radius is rounded down to a cell
    boundary x_M + h/2, and the weights must reach from the window edge to
    x_M.
    """
    check_grid(ws, f)
    h = f.h
    tail = tail.with_edges(f.u[0], f.u[-1])
    reach = int(math.floor(tail.L_M / h - 0.5))
    lo, hi = int(f.indices[0]), int(f.indices[-1])
    if lo < -reach or hi > reach:
        raise DomainError("the extension radius must contain the window")
    span = max(abs(lo), abs(hi)) + reach
    if ws.m < span:
        raise DomainError(f"weights reach m={ws.m}; the truncated sum needs m >= {span}")
    effective = replace(tail, L_M=(reach + 0.5) * h, allow_short=True)

    positions = np.arange(-reach, reach + 1)
    values = effective.values(positions * h)
    values[lo + reach : hi + reach + 1] = f.u

    # Σ_{i≠j} w_{j-i} U_i over |i| ≤ reach, and Σ_{i≠j} w_{j-i} over the same range.
    kernel = np.concatenate([ws.w[span:0:-1], [0.0], ws.w[1 : span + 1]])
    width = 2 * reach + 1
    padded = np.concatenate([np.zeros(span), values, np.zeros(span)])
    conv = _correlate(kernel, padded, width)[lo + reach : hi + reach + 1]
    prefix = np.concatenate([[0.0], np.cumsum(ws.w[1:])])
    j = f.indices
    weight_sum = prefix[j + reach] + prefix[reach - j]
    near = f.u * weight_sum - conv
    return near + tail_correction(ws.alpha, effective, f.x, f.u)


def estimate_decay_exponent(
    f: GridField,
    fraction: float = 0.1,
    offset_left: float = 0.0,
    offset_right: float = 0.0,
) -> float:
    """β from log-log least squares of |u - c±| against |x| on the outer part of the window."""
    if not 0.0 < fraction <= 0.5:
        raise DomainError(f"fit fraction must lie in (0, 0.5], got {fraction}")
    count = max(2, int(round(fraction * f.n)))
    x = np.concatenate([f.x[:count], f.x[-count:]])
    dev = np.concatenate([f.u[:count] - offset_left, f.u[-count:] - offset_right])
    usable = (np.abs(x) > 0) & (np.abs(dev) > 0)
    if usable.sum() < 3:
        raise NumericalError("not enough nonzero far-field samples to fit a decay exponent")
    slope, _ = np.polyfit(np.log(np.abs(x[usable])), np.log(np.abs(dev[usable])), 1)
    beta = -float(slope)
    if beta <= 0:
        raise NumericalError(f"far field does not decay (fitted exponent {beta:.3g})")
    logger.debug("fitted far-field decay exponent %.4f from %d samples", beta, int(usable.sum()))
    return beta


__all__ = [
    "apply",
    "apply_direct",
    "apply_fast",
    "apply_truncated",
    "check_grid",
    "energy",
    "estimate_decay_exponent",
    "exterior_values",
    "far_field",
    "tail_correction",
]
