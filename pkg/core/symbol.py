"""Semi-discrete Fourier analysis of the weight families.

The rescaled symbol of a weight set is

    M(ξ) = -h^α (w_0 + 2 Σ_{k≥1} w_k cos kξ),     ξ in [-π, π],

and the scheme is of order p when M(ξ) - |ξ|^α ~ a |ξ|^{α+p} near the
origin. Weight sets are finite, so the sum over k > m is restored from
the stored tail with the model w_k ~ C k^{-1-α}; without it M(0) would
be off by twice the tail.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import special

from core.errors import DomainError, NumericalError
from core.models import GridField, WeightFamily, WeightSet
from core.weights import check_alpha, make_weights

logger = logging.getLogger(__name__)

# Direct summation of the tail series runs until kξ reaches this value;
# the remainder is then two terms of summation by parts.
_TAIL_PHASE = 256.0
_TAIL_MAX_TERMS = 1 << 22
_CHUNK = 4096

PROBE_XI = math.pi * 2.0 ** np.arange(-12, -3)
PROBE_M = 1 << 16
_NOISE_FLOOR = 1e-13
_TAIL_NOISE = 100.0
_SP_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SymbolProbe:
    """Fitted near-origin expansion M(ξ) - |ξ|^α ≈ a |ξ|^{α+p}.

    Spectral weights have no finite order; they report ``fitted_order = inf``
    and the largest residual in ``leading_coeff``.
    """

    family: WeightFamily
    alpha: float
    fitted_order: float
    leading_coeff: float


def _cosine_sum(w: npt.NDArray[np.float64], k0: int, xi: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Σ_i w[i] cos((k0 + i) ξ), chunked over i."""
    total = np.zeros(xi.shape, dtype=float)
    for start in range(0, w.size, _CHUNK):
        k = np.arange(k0 + start, k0 + min(start + _CHUNK, w.size), dtype=float)
        total += np.cos(np.multiply.outer(xi, k)) @ w[start : start + k.size]
    return total


def _power_cosine_tail(s: float, first: int, xi: float) -> float:
    """Σ_{k≥first} k^{-s} cos kξ for 0 < |ξ| ≤ π."""
    n = min(max(first, math.ceil(_TAIL_PHASE / abs(xi))), first + _TAIL_MAX_TERMS)
    direct = 0.0
    if n > first:
        k = np.arange(first, n, dtype=float)
        direct = float(np.sum(k ** (-s) * np.cos(k * xi)))
    z = complex(math.cos(xi), math.sin(xi))
    a_n = n ** (-s)
    step = a_n * math.expm1(-s * math.log1p(1.0 / n))
    remainder = (a_n * z**n + step * z ** (n + 1) / (1.0 - z)) / (1.0 - z)
    return direct + remainder.real


def _tail_symbol(ws: WeightSet, xi: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """-2 Σ_{k>m} w_k h^α cos kξ under the k^{-1-α} tail model."""
    if ws.tail == 0.0:
        return np.zeros(xi.shape, dtype=float)
    s = 1.0 + ws.alpha
    first = ws.m + 1
    c_tail = ws.tail / float(special.zeta(s, first))
    out = np.empty(xi.shape, dtype=float)
    for i, value in np.ndenumerate(np.abs(xi)):
        out[i] = -2.0 * ws.tail if value == 0.0 else -2.0 * c_tail * _power_cosine_tail(s, first, float(value))
    return out


def symbol_from_weights(ws: WeightSet, xi: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """M(ξ) of a weight set; accepts a scalar or an array of ξ in [-π, π]."""
    x = np.asarray(xi, dtype=float)
    if np.any(np.abs(x) > math.pi * (1.0 + 1e-12)):
        raise DomainError("the rescaled symbol lives on [-π, π]")
    flat = np.atleast_1d(x).ravel()
    scaled = ws.w * ws.h**ws.alpha
    m_values = -(scaled[0] + 2.0 * _cosine_sum(scaled[1:], 1, flat)) + _tail_symbol(ws, flat)
    return m_values.reshape(x.shape)


def closed_symbol(family: WeightFamily, alpha: float, xi: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Closed-form rescaled symbol of SP, PER and GL."""
    check_alpha(family, alpha)
    a = np.abs(np.asarray(xi, dtype=float))
    if family == WeightFamily.SP:
        return a**alpha
    if family == WeightFamily.PER:
        return (2.0 * np.sin(a / 2.0)) ** alpha
    if family == WeightFamily.GL:
        chord = (2.0 * np.sin(a / 2.0)) ** alpha
        if alpha < 1.0:
            return np.cos((math.pi - a) * alpha / 2.0) / math.cos(alpha * math.pi / 2.0) * chord
        if alpha > 1.0:
            phase = (math.pi - a) * alpha / 2.0 + a
            return np.cos(phase) / math.cos(alpha * math.pi / 2.0) * chord
        s = np.sin(a / 2.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = 4.0 / math.pi * s * (s * np.log(2.0 * s) + (math.pi - a) / 2.0 * np.cos(a / 2.0))
        return np.where(a == 0.0, 0.0, value)
    raise DomainError(f"{family} weights have no closed-form symbol")


def _asymptotic_run(xi: npt.NDArray[np.float64], r: npt.NDArray[np.float64]) -> slice:
    """Longest stretch from the top of the window with one sign and |r| growing in ξ."""
    start = xi.size - 1
    while start > 0 and np.sign(r[start - 1]) == np.sign(r[-1]) and abs(r[start - 1]) < abs(r[start]):
        start -= 1
    return slice(start, xi.size)


def accuracy_order_probe(family: WeightFamily, alpha: float) -> SymbolProbe:
    """Fit p and a in M(ξ) - |ξ|^α ≈ a|ξ|^{α+p} on ξ = 2^{-12}π .. 2^{-4}π.

    Points whose residual is within reach of the truncation error of the
    generated weights are dropped, and the fit uses the stretch at the top
    of the window where the residual keeps one sign and grows with ξ.
    """
    exact = PROBE_XI**alpha
    if family == WeightFamily.SP:
        residual = np.abs(closed_symbol(family, alpha, PROBE_XI) - exact)
        worst = float(residual.max())
        if worst > _SP_TOLERANCE:
            raise NumericalError(f"spectral symbol residual {worst:.3e} above tolerance")
        return SymbolProbe(family=family, alpha=alpha, fitted_order=math.inf, leading_coeff=worst)

    floor = _NOISE_FLOOR
    if family in (WeightFamily.T, WeightFamily.Q):
        ws = make_weights(family, alpha, 1.0, PROBE_M)
        values = symbol_from_weights(ws, PROBE_XI)
        if family == WeightFamily.Q:
            # The k^{-1-α} tail model misses the parity oscillation of Q, an
            # error of the size of the last stored weight.
            floor = max(floor, _TAIL_NOISE * abs(float(ws.w[-1])))
    else:
        values = closed_symbol(family, alpha, PROBE_XI)
    residual = values - exact

    keep = np.abs(residual) > floor
    xi, r = PROBE_XI[keep], residual[keep]
    run = _asymptotic_run(xi, r) if xi.size else slice(0, 0)
    xi, r = xi[run], r[run]
    if xi.size < 3:
        raise NumericalError(f"{family} symbol residual has fewer than three usable points above {floor:.1e}")
    if xi.size < keep.sum():
        logger.info("%s alpha=%g order fit uses %d of %d probe points", family, alpha, xi.size, PROBE_XI.size)

    # log|r| = log|a| + (α+p) log ξ + log(1 + bξ + cξ²); the last factor
    # absorbs the next terms of the expansion.
    design = np.column_stack([np.ones_like(xi), np.log(xi), xi, xi**2])
    if xi.size < design.shape[1] + 1:
        design = design[:, :2]
    coeffs, *_ = np.linalg.lstsq(design, np.log(np.abs(r)), rcond=None)
    intercept, slope = coeffs[0], coeffs[1]
    order = float(slope - alpha)
    coeff = float(np.sign(r[0]) * math.exp(intercept))
    logger.debug("%s alpha=%g fitted order %.4f coefficient %.5g", family, alpha, order, coeff)
    return SymbolProbe(family=family, alpha=alpha, fitted_order=order, leading_coeff=coeff)


def semi_discrete_fourier(f: GridField, xi: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """û(ξ) = h Σ_j e^{-iξx_j} u_j for ξ in [-π/h, π/h]."""
    x = np.asarray(xi, dtype=float)
    flat = np.atleast_1d(x).ravel()
    phase = np.exp(-1j * np.multiply.outer(flat, f.x))
    return (f.h * (phase @ f.u)).reshape(x.shape)
