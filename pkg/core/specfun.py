"""Special functions behind the closed-form weights and the oracles.

Real Gamma, log-Gamma and the Gauss hypergeometric function come from
:mod:`scipy.special`; this module adds the domain guards the rest of the
package relies on. The upper incomplete Gamma function with a complex
argument has no scipy counterpart and is implemented here with the
classic split: a power series for the lower function when ``|z| < a+1``
and a modified Lentz continued fraction otherwise. Both branches are
vectorised over ``z`` and track convergence per element.
"""

from __future__ import annotations

import logging
import math
from typing import overload

import numpy as np
import numpy.typing as npt
from scipy import special

from core.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

_MAX_ITERATIONS = 10_000
_SERIES_EPS = 1e-16
_LENTZ_EPS = 1e-15
_TINY = 1e-300
_HYP2F1_MAX_ARG = 0.9


def _is_pole(x: npt.ArrayLike) -> npt.NDArray[np.bool_]:
    arr = np.asarray(x, dtype=float)
    return (arr <= 0) & (arr == np.round(arr))


@overload
def gamma(x: float) -> float: ...
@overload
def gamma(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]: ...
def gamma(x: float | npt.NDArray[np.float64]) -> float | npt.NDArray[np.float64]:
    """Γ(x), rejecting the poles at 0, -1, -2, ..."""
    if np.any(_is_pole(x)):
        raise DomainError(f"gamma has a pole at non-positive integer argument {x!r}")
    if np.ndim(x) == 0:
        return float(special.gamma(x))
    return np.asarray(special.gamma(x), dtype=float)


@overload
def log_gamma(x: float) -> float: ...
@overload
def log_gamma(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]: ...
def log_gamma(x: float | npt.NDArray[np.float64]) -> float | npt.NDArray[np.float64]:
    """log|Γ(x)|. Used for Gamma ratios that would overflow directly."""
    if np.any(_is_pole(x)):
        raise DomainError(f"log_gamma has a pole at non-positive integer argument {x!r}")
    if np.ndim(x) == 0:
        return float(special.gammaln(x))
    return np.asarray(special.gammaln(x), dtype=float)


def riesz_constant(alpha: float) -> float:
    """C_{1,α} = α 2^{α-1} Γ((1+α)/2) / (√π Γ((2-α)/2)) for α in (0, 2)."""
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"riesz_constant needs alpha in (0, 2), got {alpha}")
    return (
        alpha
        * 2.0 ** (alpha - 1.0)
        * special.gamma((1.0 + alpha) / 2.0)
        / (math.sqrt(math.pi) * special.gamma((2.0 - alpha) / 2.0))
    )


def _lower_series(a: float, z: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    """γ(a, z) = z^a e^{-z} Σ z^n / (a (a+1) ... (a+n))."""
    term = np.full(z.shape, 1.0 / a, dtype=complex)
    total = term.copy()
    active = np.ones(z.shape, dtype=bool)
    ap = a
    for _ in range(_MAX_ITERATIONS):
        ap += 1.0
        term[active] *= z[active] / ap
        total[active] += term[active]
        active &= np.abs(term) >= np.abs(total) * _SERIES_EPS
        if not active.any():
            break
    else:
        raise NumericalError(f"incomplete gamma series did not converge for a={a}")
    return total * np.exp(-z + a * np.log(z))


def _upper_continued_fraction(
    a: float, z: npt.NDArray[np.complex128]
) -> npt.NDArray[np.complex128]:
    """Γ(a, z) by the modified Lentz evaluation of the Legendre fraction."""
    b = z + 1.0 - a
    c = np.full(z.shape, 1.0 / _TINY, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(z.shape, dtype=bool)
    for i in range(1, _MAX_ITERATIONS + 1):
        an = -i * (i - a)
        b = b + 2.0
        d_new = an * d + b
        d_new[np.abs(d_new) < _TINY] = _TINY
        c_new = b + an / c
        c_new[np.abs(c_new) < _TINY] = _TINY
        d_new = 1.0 / d_new
        delta = d_new * c_new
        d[active] = d_new[active]
        c[active] = c_new[active]
        h[active] *= delta[active]
        active &= np.abs(delta - 1.0) >= _LENTZ_EPS
        if not active.any():
            logger.debug("Lentz fraction converged after %d iterations (a=%g)", i, a)
            break
    else:
        raise NumericalError(f"incomplete gamma continued fraction did not converge for a={a}")
    return h * np.exp(-z + a * np.log(z))


@overload
def upper_incomplete_gamma(a: float, z: complex) -> complex: ...
@overload
def upper_incomplete_gamma(
    a: float, z: npt.NDArray[np.complex128]
) -> npt.NDArray[np.complex128]: ...
def upper_incomplete_gamma(
    a: float, z: complex | npt.NDArray[np.complex128]
) -> complex | npt.NDArray[np.complex128]:
    """Γ(a, z) = ∫_z^∞ t^{a-1} e^{-t} dt for a in (0, 4) and complex z.

    The principal branch of z^a is used, so for z = -iπk the result is
    consistent with (-ik)^{-a} scalings of the same branch.
    """
    if not 0.0 < a < 4.0:
        raise DomainError(f"upper_incomplete_gamma needs a in (0, 4), got {a}")
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(zz)):
        raise DomainError("upper_incomplete_gamma needs finite z")

    out = np.empty(zz.shape, dtype=complex)
    gamma_a = special.gamma(a)
    zero = zz == 0
    out[zero] = gamma_a
    use_series = (np.abs(zz) < a + 1.0) & ~zero
    use_fraction = ~use_series & ~zero
    if use_series.any():
        out[use_series] = gamma_a - _lower_series(a, zz[use_series])
    if use_fraction.any():
        out[use_fraction] = _upper_continued_fraction(a, zz[use_fraction])
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"upper_incomplete_gamma produced a non-finite value for a={a}")

    if np.ndim(z) == 0:
        return complex(out[0])
    return out.reshape(np.shape(z))


@overload
def gauss_2f1(a: float, b: float, c: float, z: float) -> float: ...
@overload
def gauss_2f1(
    a: float, b: float, c: float, z: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]: ...
def gauss_2f1(
    a: float, b: float, c: float, z: float | npt.NDArray[np.float64]
) -> float | npt.NDArray[np.float64]:
    """₂F₁(a, b; c; z) restricted to |z| ≤ 0.9."""
    if _is_pole(c):
        raise DomainError(f"gauss_2f1 needs c off the non-positive integers, got {c}")
    zz = np.asarray(z, dtype=float)
    if np.any(np.abs(zz) > _HYP2F1_MAX_ARG):
        raise DomainError(f"gauss_2f1 argument outside |z| <= {_HYP2F1_MAX_ARG}")
    value = special.hyp2f1(a, b, c, zz)
    if not np.all(np.isfinite(value)):
        raise NumericalError(f"gauss_2f1({a}, {b}; {c}; z) is not finite")
    if np.ndim(z) == 0:
        return float(value)
    return np.asarray(value, dtype=float)
