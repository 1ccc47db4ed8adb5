"""Weight families of the finite-difference fractional Laplacian.

The discrete operator is

    (-Δ_h)^{α/2} u_j = Σ_{k≠0} (u_j - u_{j-k}) w_k,     w_{-k} = w_k,

and every family here produces the half-sequence w_0..w_m with the
convention w_0 = -Σ_{k≠0} w_k taken over *all* k. The families are:

* ``SP``  spectral weights, the exact symbol |ξ|^α sampled on [-π, π];
  evaluated through the upper incomplete Gamma function at z = -iπk.
* ``PER`` weights of the periodic symbol (2 - 2cos ξ)^{α/2}; explicit
  Gamma ratios.
* ``GL``  centred Grünwald-Letnikov weights (two branches, plus the
  special sequence at exactly α = 1).
* ``T``, ``Q`` quadrature weights from piecewise linear / quadratic
  interpolation of u in the singular integral, with a Taylor patch near
  the singularity.

All closed forms are evaluated at h = 1 and scaled by h^{-α} afterwards,
so ``w·h^α`` does not depend on h.

Failures
--------

Out-of-range α raises :class:`core.errors.DomainError`. Gamma ratios go
through log-Gamma differences past index 20, so large m never overflows.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import special

from core.errors import DomainError, NumericalError
from core.models import WeightFamily, WeightSet
from core.specfun import riesz_constant, upper_incomplete_gamma
from utils.quadrature import cosine_panels, panel_sum

logger = logging.getLogger(__name__)

Parity = Literal["even", "odd", "any"]
Symbol = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]

# Below this index Gamma ratios are formed directly; above it through logΓ.
_DIRECT_GAMMA_MAX_K = 20
# T and Q weights past this index are integrated panel by panel instead of
# differenced, which avoids the cancellation of the F/G formulas.
_FG_MAX_K = 32
_QUAD_ORDER = 16
_QUAD_CHECK_ORDER = 12

# (lower, upper, upper inclusive) admissible α per family.
_ALPHA_RANGE: dict[WeightFamily, tuple[float, float, bool]] = {
    WeightFamily.SP: (0.0, 2.0, True),
    WeightFamily.PER: (0.0, 2.0, True),
    WeightFamily.GL: (0.0, 2.0, True),
    WeightFamily.T: (0.0, 2.0, False),
    WeightFamily.Q: (0.0, 2.0, False),
}


def check_alpha(family: WeightFamily, alpha: float) -> None:
    lo, hi, inclusive = _ALPHA_RANGE[family]
    ok = lo < alpha < hi or (inclusive and alpha == hi)
    if not ok:
        bracket = "]" if inclusive else ")"
        raise DomainError(f"{family} weights need alpha in ({lo:g}, {hi:g}{bracket}, got {alpha}")


def _gamma_ratio(p: npt.NDArray[np.float64], q: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Γ(p)/Γ(q) for positive p, q; log-Gamma difference for large arguments."""
    direct = np.maximum(p, q) <= _DIRECT_GAMMA_MAX_K
    out = np.empty(np.broadcast(p, q).shape, dtype=float)
    out[direct] = special.gamma(p[direct]) / special.gamma(q[direct])
    far = ~direct
    out[far] = np.exp(special.gammaln(p[far]) - special.gammaln(q[far]))
    return out


def _three_point(m: int) -> npt.NDArray[np.float64]:
    w = np.zeros(m + 1)
    w[0], w[1] = -2.0, 1.0
    return w


# ----------------------------------------------------------------------
# per-family generators at h = 1
# ----------------------------------------------------------------------


def _sp(alpha: float, m: int) -> npt.NDArray[np.float64]:
    k = np.arange(1, m + 1, dtype=float)
    w = np.empty(m + 1)
    if alpha == 1.0:
        w[1:] = (1.0 - (-1.0) ** k) / (k**2 * math.pi)
        w[0] = -math.pi / 2.0
        return w
    if alpha == 2.0:
        w[1:] = 2.0 * (-1.0) ** (k + 1.0) / k**2
        w[0] = -(math.pi**2) / 3.0
        return w
    a = 1.0 + alpha
    upper = upper_incomplete_gamma(a, -1j * math.pi * k)
    scale = np.power(-1j * k, -a)
    w[1:] = np.real(scale * (upper - special.gamma(a))) / math.pi
    w[0] = -(math.pi**alpha) / (1.0 + alpha)
    return w


def _per(alpha: float, m: int) -> npt.NDArray[np.float64]:
    if alpha == 2.0:
        return _three_point(m)
    k = np.arange(1, m + 1, dtype=float)
    w = np.empty(m + 1)
    prefactor = special.gamma(1.0 + alpha) * math.sin(alpha * math.pi / 2.0) / math.pi
    w[1:] = prefactor * _gamma_ratio(k - alpha / 2.0, k + 1.0 + alpha / 2.0)
    w[0] = -4.0 * special.gamma(alpha) / (alpha * special.gamma(alpha / 2.0) ** 2)
    return w


def _gl(alpha: float, m: int) -> npt.NDArray[np.float64]:
    if alpha == 2.0:
        return _three_point(m)
    k = np.arange(1, m + 1, dtype=float)
    w = np.empty(m + 1)
    if alpha == 1.0:
        w[1:] = 1.0 / (math.pi * k * (k + 1.0))
        w[0] = -2.0 / math.pi
        return w
    cos_a = math.cos(alpha * math.pi / 2.0)
    shape = alpha * special.rgamma(1.0 - alpha) / (2.0 * cos_a)
    if alpha < 1.0:
        w[1:] = shape * _gamma_ratio(k - alpha, k + 1.0)
        w[0] = -1.0 / cos_a
    else:
        w[1] = -(1.0 + alpha * (alpha - 1.0) / 2.0) / (2.0 * cos_a)
        kk = k[1:]
        w[2:] = shape * _gamma_ratio(kk + 1.0 - alpha, kk + 2.0)
        w[0] = alpha / cos_a
    return w


def gl_shifted_reference(alpha: float, k: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """The (0, 1) GL formula α Γ(j-α)/(2cos(απ/2) j! Γ(1-α)) at index j = k + 1.

    For α in (1, 2) this reproduces the GL weights with k > 1.
    """
    cos_a = math.cos(alpha * math.pi / 2.0)
    j = np.asarray(k, dtype=float) + 1.0
    return alpha * special.gamma(j - alpha) / (
        2.0 * cos_a * special.factorial(j) * special.gamma(1.0 - alpha)
    )


def aux_f(t: npt.NDArray[np.float64], alpha: float) -> npt.NDArray[np.float64]:
    """F with F'' = t^{-1-α}."""
    if alpha == 1.0:
        return -np.log(np.abs(t))
    return np.abs(t) ** (1.0 - alpha) / ((alpha - 1.0) * alpha)


def aux_f_prime(t: npt.NDArray[np.float64], alpha: float) -> npt.NDArray[np.float64]:
    if alpha == 1.0:
        return -1.0 / t
    return -(np.abs(t) ** (-alpha)) / alpha


def aux_g(t: npt.NDArray[np.float64], alpha: float) -> npt.NDArray[np.float64]:
    """G with G' = F."""
    if alpha == 1.0:
        return t - t * np.log(np.abs(t))
    return np.abs(t) ** (2.0 - alpha) / ((2.0 - alpha) * (alpha - 1.0) * alpha)


def _panel_weights(
    alpha: float,
    k: npt.NDArray[np.float64],
    panels: list[tuple[float, float, Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]]],
) -> npt.NDArray[np.float64]:
    """Σ over panels of ∫ basis(t - k) t^{-1-α} dt, vectorised over k.

    Each panel is (offset_lo, offset_hi, basis) relative to the node k.
    """
    nodes, gw = np.polynomial.legendre.leggauss(_QUAD_ORDER)
    total = np.zeros_like(k)
    for lo, hi, basis in panels:
        half = 0.5 * (hi - lo)
        s = 0.5 * (hi + lo) + half * nodes
        t = k[:, None] + s[None, :]
        total += half * np.sum(gw[None, :] * basis(s)[None, :] * t ** (-1.0 - alpha), axis=1)
    return total


def _tent_panels() -> list[tuple[float, float, Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]]]:
    return [
        (-1.0, 0.0, lambda s: 1.0 + s),
        (0.0, 1.0, lambda s: 1.0 - s),
    ]


def _t(alpha: float, m: int) -> npt.NDArray[np.float64]:
    c = riesz_constant(alpha)
    F = lambda t: aux_f(np.asarray(t, dtype=float), alpha)  # noqa: E731
    w = np.empty(m + 1)
    w[1] = 1.0 / (2.0 - alpha) - float(aux_f_prime(np.array(1.0), alpha)) + F(2.0) - F(1.0)
    near = np.arange(2, min(m, _FG_MAX_K) + 1, dtype=float)
    w[2 : near.size + 2] = F(near + 1.0) - 2.0 * F(near) + F(near - 1.0)
    if m > _FG_MAX_K:
        far = np.arange(_FG_MAX_K + 1, m + 1, dtype=float)
        w[_FG_MAX_K + 1 :] = _panel_weights(alpha, far, _tent_panels())
    w[1:] *= c
    w[0] = -4.0 * c / (alpha * (2.0 - alpha))
    return w


def _q(alpha: float, m: int) -> npt.NDArray[np.float64]:
    c = riesz_constant(alpha)
    G = lambda t: aux_g(np.asarray(t, dtype=float), alpha)  # noqa: E731
    dG = lambda t: aux_f(np.asarray(t, dtype=float), alpha)  # noqa: E731
    ddG = lambda t: aux_f_prime(np.asarray(t, dtype=float), alpha)  # noqa: E731
    w = np.empty(m + 1)
    w[1] = 1.0 / (2.0 - alpha) - ddG(1.0) - (dG(3.0) + 3.0 * dG(1.0)) / 2.0 + G(3.0) - G(1.0)

    k = np.arange(2, min(m, _FG_MAX_K) + 1, dtype=float)
    even = k[k % 2 == 0]
    odd = k[k % 2 == 1]
    w[even.astype(int)] = 2.0 * (dG(even + 1.0) + dG(even - 1.0) - G(even + 1.0) + G(even - 1.0))
    w[odd.astype(int)] = (
        -(dG(odd + 2.0) + 6.0 * dG(odd) + dG(odd - 2.0)) / 2.0 + G(odd + 2.0) - G(odd - 2.0)
    )

    if m > _FG_MAX_K:
        far = np.arange(_FG_MAX_K + 1, m + 1, dtype=float)
        far_even = far[far % 2 == 0]
        far_odd = far[far % 2 == 1]
        midpoint = [(-1.0, 1.0, lambda s: 1.0 - s**2)]
        endpoint = [
            (-2.0, 0.0, lambda s: (s + 2.0) * (s + 1.0) / 2.0),
            (0.0, 2.0, lambda s: (s - 1.0) * (s - 2.0) / 2.0),
        ]
        w[far_even.astype(int)] = _panel_weights(alpha, far_even, midpoint)
        w[far_odd.astype(int)] = _panel_weights(alpha, far_odd, endpoint)

    w[1:] *= c
    w[0] = -4.0 * c / (alpha * (2.0 - alpha))
    return w


_GENERATORS: dict[WeightFamily, Callable[[float, int], npt.NDArray[np.float64]]] = {
    WeightFamily.SP: _sp,
    WeightFamily.PER: _per,
    WeightFamily.GL: _gl,
    WeightFamily.T: _t,
    WeightFamily.Q: _q,
}


# ----------------------------------------------------------------------
# public surface
# ----------------------------------------------------------------------


def make_weights(family: WeightFamily, alpha: float, h: float, m: int) -> WeightSet:
    """Generate w_0..w_m for ``family`` on a grid of spacing ``h``."""
    check_alpha(family, alpha)
    if m < 1:
        raise DomainError(f"truncation length must be at least 1, got {m}")
    if h <= 0:
        raise DomainError(f"grid spacing must be positive, got {h}")
    unit = _GENERATORS[family](alpha, int(m))
    if not np.all(np.isfinite(unit)):
        raise NumericalError(f"{family} weights at alpha={alpha} lost all precision")
    tail = 0.0 if alpha == 2.0 and family != WeightFamily.SP else -unit[0] / 2.0 - unit[1:].sum()
    logger.debug("%s weights alpha=%g m=%d tail=%.3e", family, alpha, m, tail)
    return WeightSet(family=family, alpha=alpha, h=h, w=unit * h ** (-alpha), tail=float(tail))


def cfl_cmax(family: WeightFamily, alpha: float) -> float:
    """Largest stable Δt/h^α of the explicit heat step, (-h^α w_0)^{-1}."""
    check_alpha(family, alpha)
    if family == WeightFamily.SP:
        if alpha >= 1.0:
            raise DomainError("SP weights become negative for alpha >= 1; no CFL constant")
        return math.pi ** (-alpha) * (1.0 + alpha)
    if family == WeightFamily.PER:
        return alpha * special.gamma(alpha / 2.0) ** 2 / (4.0 * special.gamma(alpha))
    if family == WeightFamily.GL:
        if alpha == 1.0:
            return math.pi / 2.0
        cos_a = math.cos(alpha * math.pi / 2.0)
        return cos_a if alpha < 1.0 else -cos_a / alpha
    return (
        math.sqrt(math.pi)
        * special.gamma(2.0 - alpha / 2.0)
        / (2.0**alpha * special.gamma((1.0 + alpha) / 2.0))
    )


def decay_prefactor(family: WeightFamily, alpha: float, parity: Parity = "any") -> float:
    """C in w_k ~ C k^{-1-α} h^{-α}.

    Q alternates between panel midpoints (even k, 4/3 C_{1,α}) and shared
    panel endpoints (odd k, 2/3 C_{1,α}); ``any`` gives the parity average.
    """
    check_alpha(family, alpha)
    if alpha == 2.0:
        raise DomainError("weights at alpha = 2 are compactly supported; no decay law")
    c = riesz_constant(alpha)
    if family == WeightFamily.SP:
        if alpha > 1.0:
            raise DomainError("SP weights alternate in sign for alpha in (1, 2); no single prefactor")
        if alpha == 1.0:
            return {"odd": 2.0 * c, "even": 0.0, "any": c}[parity]
        return c
    if family == WeightFamily.Q:
        return {"even": 4.0 * c / 3.0, "odd": 2.0 * c / 3.0, "any": c}[parity]
    return c


def is_nonnegative(ws: WeightSet) -> bool:
    return bool(np.all(ws.w[1:] >= 0.0))


def weights_from_symbol(M: Symbol, alpha: float, h: float, m: int) -> WeightSet:
    """w_k = -h^{-α}/π ∫_0^π M(ξ) cos(kξ) dξ for k = 1..m, w_0 by tail closure.

    Panels run between consecutive zeros of cos(kξ) and are graded towards
    ξ = 0, where M behaves like |ξ|^α. A second, lower-order rule on the
    same panels flags integrands the panels do not resolve. The cost grows
    like m², so this is meant for m up to a few thousand.
    """
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    if m < 1:
        raise DomainError(f"truncation length must be at least 1, got {m}")
    scale = float(panel_sum(lambda xi: np.abs(M(xi)), cosine_panels(0))) + 1e-300
    unit = np.zeros(m + 1)
    for k in range(1, m + 1):
        edges = cosine_panels(k)
        integrand = lambda xi, k=k: M(xi) * np.cos(k * xi)  # noqa: E731
        value = panel_sum(integrand, edges, _QUAD_ORDER)
        check = panel_sum(integrand, edges, _QUAD_CHECK_ORDER)
        if not math.isfinite(value) or abs(value - check) > 1e-7 * scale:
            raise NumericalError(f"symbol quadrature did not converge at k={k}")
        unit[k] = -value / math.pi

    s = 1.0 + alpha
    if m >= 2:
        c_est = 0.5 * (unit[m - 1] * (m - 1) ** s + unit[m] * m**s)
    else:
        c_est = unit[m] * m**s
    tail = float(c_est * special.zeta(s, m + 1))
    unit[0] = -2.0 * (unit[1:].sum() + tail)
    return WeightSet(family=None, alpha=alpha, h=h, w=unit * h ** (-alpha), tail=tail)


def weights_csv_rows(ws: WeightSet) -> list[tuple[int, float]]:
    """Rows ``(k, w_k)`` for the weight-table export."""
    return [(k, float(v)) for k, v in enumerate(ws.w)]
