"""Reference values for the fractional Laplacian and the fractional heat flow.

Closed forms for a Gaussian, the Lorentzian-type profile
(1+x²)^{-(1-α)/2} and the beta bumps (1-x²)_+^{k+α/2}; the heat flow is
evaluated from its Fourier representation by panel quadrature.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from enum import StrEnum

import numpy as np
import numpy.typing as npt
from scipy import special

from core.errors import ConfigError, DomainError, NumericalError
from core.specfun import gauss_2f1
from utils.quadrature import oscillation_panels, panel_sum

logger = logging.getLogger(__name__)

Spectrum = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.complex128]]

# e^{-|ξ|^α t} drops below this past the quadrature cutoff.
_KERNEL_FLOOR = 1e-16
_CHECK_ORDER = 12
_OUTER_MAX_ARG = 0.9


class OracleKind(StrEnum):
    GAUSSIAN0 = "gaussian0"
    LORENTZIAN = "lorentzian"
    BETA_BUMP = "beta_bump"
    HEAT_GREEN = "heat_green"


def parse_oracle(raw: str) -> tuple[OracleKind, int]:
    """Parse ``gaussian0``, ``lorentzian``, ``beta_bump:k`` or ``heat_green``."""
    name, _, arg = raw.strip().partition(":")
    try:
        kind = OracleKind(name.lower())
    except ValueError:
        choices = ", ".join(k.value for k in OracleKind)
        raise ConfigError(f"unknown oracle {raw!r} (expected one of {choices})") from None
    if kind != OracleKind.BETA_BUMP:
        if arg:
            raise ConfigError(f"oracle {name} takes no parameter")
        return kind, 0
    try:
        k = int(arg) if arg else 0
    except ValueError:
        raise ConfigError(f"beta_bump order must be an integer, got {arg!r}") from None
    if k < 0:
        raise ConfigError("beta_bump order must be nonnegative")
    return kind, k


def _check_open(alpha: float) -> None:
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")


def flap_gaussian_origin(alpha: float) -> float:
    """(-Δ)^{α/2} e^{-x²} at x = 0."""
    _check_open(alpha)
    return 2.0**alpha * special.gamma((1.0 + alpha) / 2.0) / math.sqrt(math.pi)


def flap_gaussian(alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """(-Δ)^{α/2} e^{-x²} everywhere, through Kummer's ₁F₁."""
    return flap_gaussian_origin(alpha) * special.hyp1f1(
        (1.0 + alpha) / 2.0, 0.5, -np.asarray(x, dtype=float) ** 2
    )


def lorentzian(alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return (1.0 + np.asarray(x, dtype=float) ** 2) ** (-(1.0 - alpha) / 2.0)


def flap_lorentzian(alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """(-Δ)^{α/2} (1+x²)^{-(1-α)/2}; identically 0 at α = 1."""
    _check_open(alpha)
    prefactor = 2.0**alpha * special.gamma((1.0 + alpha) / 2.0) * special.rgamma((1.0 - alpha) / 2.0)
    return prefactor * (1.0 + np.asarray(x, dtype=float) ** 2) ** (-(1.0 + alpha) / 2.0)


def beta_bump(k: int, alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return np.maximum(1.0 - np.asarray(x, dtype=float) ** 2, 0.0) ** (k + alpha / 2.0)


def bump_constants(k: int, alpha: float) -> tuple[float, float]:
    """(K_{k,α}, K̃_{k,α}) of the inner and outer branch."""
    common = 2.0**alpha * special.gamma(k + 1.0 + alpha / 2.0) * special.gamma((1.0 + alpha) / 2.0)
    inner = common / (special.factorial(k) * math.sqrt(math.pi))
    outer = common / (special.gamma(-alpha / 2.0) * special.gamma((3.0 + alpha) / 2.0 + k))
    return float(inner), float(outer)


def flap_beta_bump(k: int, alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """(-Δ)^{α/2} (1-x²)_+^{k+α/2} on |x| < 1 and |x| ≥ 1.054."""
    _check_open(alpha)
    if k < 0:
        raise DomainError(f"bump order must be nonnegative, got {k}")
    xs = np.asarray(x, dtype=float)
    ax = np.abs(xs)
    inside = ax < 1.0
    if np.any(ax[~inside] ** -2.0 > _OUTER_MAX_ARG):
        raise DomainError("beta bump oracle is not evaluated for 1 <= |x| < 1.054")
    k_in, k_out = bump_constants(k, alpha)
    out = np.empty(xs.shape, dtype=float)
    # terminating series: a polynomial of degree k in x²
    out[inside] = k_in * special.hyp2f1((1.0 + alpha) / 2.0, -k, 0.5, xs[inside] ** 2)
    far = ~inside
    if far.any():
        z = ax[far] ** -2.0
        out[far] = (
            k_out
            * ax[far] ** (-1.0 - alpha)
            * gauss_2f1((1.0 + alpha) / 2.0, (2.0 + alpha) / 2.0, (3.0 + alpha) / 2.0 + k, z)
        )
    return out


def k_alpha(alpha: float) -> float:
    """K_α = 2^α Γ(1+α/2) Γ((1+α)/2) / √π, the value of (-Δ)^{α/2}(1-x²)_+^{α/2} inside."""
    _check_open(alpha)
    return bump_constants(0, alpha)[0]


def v_g(alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Mean exit time (1-x²)_+^{α/2} / K_α, solving (-Δ)^{α/2} v = 1 on (-1, 1)."""
    return beta_bump(0, alpha, x) / k_alpha(alpha)


def flap_v_g(alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return flap_beta_bump(0, alpha, x) / k_alpha(alpha)


def gaussian_spectrum(xi: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
    """Fourier transform of e^{-x²}."""
    return (math.sqrt(math.pi) * np.exp(-(xi**2) / 4.0)).astype(complex)


def sign_spectrum(xi: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
    """Principal-value transform 2/(iξ) of sign(x)."""
    return 2.0 / (1j * xi)


def _kernel_cutoff(alpha: float, t: float) -> float:
    return (-math.log(_KERNEL_FLOOR) / t) ** (1.0 / alpha)


def _checked_integral(f: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]], edges: npt.NDArray[np.float64]) -> float:
    value = panel_sum(f, edges)
    check = panel_sum(f, edges, _CHECK_ORDER)
    if not math.isfinite(value) or abs(value - check) > 1e-8 * max(1.0, abs(value)):
        raise NumericalError(f"heat kernel quadrature did not converge ({value!r} vs {check!r})")
    return value


def heat_green(
    alpha: float,
    t: float,
    x: npt.ArrayLike,
    u0_spectrum: Spectrum,
    spectrum_cutoff: float = math.inf,
) -> npt.NDArray[np.float64]:
    """u(x, t) = (1/2π) ∫ e^{iξx} e^{-|ξ|^α t} û₀(ξ) dξ.

    The integral is folded onto ξ > 0 and cut where the kernel falls below
    1e-16, or at ``spectrum_cutoff`` when û₀ decays faster than that.
    """
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    if t <= 0:
        raise DomainError(f"heat oracle needs t > 0, got {t}")
    upper = min(_kernel_cutoff(alpha, t), spectrum_cutoff)
    xs = np.asarray(x, dtype=float)
    out = np.empty(xs.shape, dtype=float)
    for idx, xj in np.ndenumerate(xs):

        def integrand(xi: npt.NDArray[np.float64], xj: float = float(xj)) -> npt.NDArray[np.float64]:
            kernel = np.exp(-(xi**alpha) * t)
            folded = np.exp(1j * xi * xj) * u0_spectrum(xi) + np.exp(-1j * xi * xj) * u0_spectrum(-xi)
            return kernel * folded.real

        out[idx] = _checked_integral(integrand, oscillation_panels(xj, upper)) / (2.0 * math.pi)
    return out


def heat_sign_green(alpha: float, t: float, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Heat flow of sign(x): (2/π) ∫_0^∞ sin(ξx)/ξ e^{-ξ^α t} dξ."""
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    if t <= 0:
        raise DomainError(f"heat oracle needs t > 0, got {t}")
    upper = _kernel_cutoff(alpha, t)
    xs = np.asarray(x, dtype=float)
    out = np.empty(xs.shape, dtype=float)
    for idx, xj in np.ndenumerate(xs):
        if xj == 0.0:
            out[idx] = 0.0
            continue

        def integrand(xi: npt.NDArray[np.float64], xj: float = float(xj)) -> npt.NDArray[np.float64]:
            return np.sin(xi * xj) / xi * np.exp(-(xi**alpha) * t)

        out[idx] = 2.0 / math.pi * _checked_integral(integrand, oscillation_panels(xj, upper))
    logger.debug("sign heat oracle alpha=%g t=%g at %d points (cutoff %.3g)", alpha, t, xs.size, upper)
    return out
