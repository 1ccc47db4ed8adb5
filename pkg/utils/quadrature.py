"""Composite Gauss-Legendre quadrature on explicit panel edges.

Callers choose the panels: between consecutive zeros of an oscillating
factor, and geometrically graded towards an endpoint where the integrand
behaves like a fractional power. Each panel then carries a smooth
integrand and a fixed-order rule converges to machine precision.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from functools import cache

import numpy as np
import numpy.typing as npt

DEFAULT_ORDER = 16
# Geometric grading towards a singular endpoint: panel widths halve this
# many times, leaving a first panel of relative width 2**-_GRADING_LEVELS.
_GRADING_LEVELS = 48

Integrand = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


@cache
def _rule(order: int) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def panel_sum(f: Integrand, edges: npt.ArrayLike, order: int = DEFAULT_ORDER) -> float:
    """∫ f over [edges[0], edges[-1]] as a sum of Gauss-Legendre panels."""
    e = np.asarray(edges, dtype=float)
    nodes, weights = _rule(order)
    half = 0.5 * (e[1:] - e[:-1])
    mid = 0.5 * (e[1:] + e[:-1])
    t = mid[:, None] + half[:, None] * nodes[None, :]
    return float(np.sum(half[:, None] * weights[None, :] * f(t)))


def graded_edges(a: float, b: float, levels: int = _GRADING_LEVELS) -> npt.NDArray[np.float64]:
    """Edges on [a, b] refined geometrically towards ``a``."""
    ratios = 0.5 ** np.arange(levels, -1, -1)
    return np.concatenate([[a], a + (b - a) * ratios])


def cosine_panels(k: int, upper: float = math.pi) -> npt.NDArray[np.float64]:
    """Edges on [0, upper] at the zeros of cos(kξ), graded towards 0."""
    if k == 0:
        return graded_edges(0.0, upper)
    zeros = (np.arange(k) + 0.5) * math.pi / k
    zeros = zeros[zeros < upper]
    first = zeros[0] if zeros.size else upper
    return np.concatenate([graded_edges(0.0, first), zeros[1:], [upper]])


def oscillation_panels(
    frequency: float, upper: float, min_panels: int = 8
) -> npt.NDArray[np.float64]:
    """Edges on [0, upper] spaced by half periods of sin/cos(frequency·ξ), graded towards 0."""
    count = max(min_panels, math.ceil(abs(frequency) * upper / math.pi))
    uniform = np.linspace(0.0, upper, count + 1)
    return np.concatenate([graded_edges(0.0, uniform[1]), uniform[2:]])
