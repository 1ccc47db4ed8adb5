"""Data models shared across the numerical modules.

All models are frozen dataclasses. Array payloads are stored as numpy
arrays flagged read-only at construction, so a :class:`WeightSet` or a
:class:`GridField` can be shared between sweep worker threads without
copying.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field, replace
from enum import StrEnum

import numpy as np
import numpy.typing as npt
from scipy import special

from core.errors import ConfigError, DomainError


class WeightFamily(StrEnum):
    """The five weight families of the scheme."""

    SP = "SP"
    PER = "PER"
    GL = "GL"
    T = "T"
    Q = "Q"


def parse_family(raw: str) -> WeightFamily:
    """Parse a family tag case-insensitively."""
    try:
        return WeightFamily(raw.strip().upper())
    except ValueError:
        choices = ", ".join(f.value for f in WeightFamily)
        raise ConfigError(f"unknown weight family {raw!r} (expected one of {choices})") from None


def _frozen_array(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class WeightSet:
    """Half-sequence of convolution weights w_0..w_m (w_{-k} = w_k).

    ``tail`` is the h-free remainder Σ_{k>m} w_k h^α, so that
    ``w[0] == -2 * (w[1:].sum() + tail / h**alpha)`` holds for any m.
    ``family`` is ``None`` for weights generated from an arbitrary symbol.
    """

    family: WeightFamily | None
    alpha: float
    h: float
    w: npt.NDArray[np.float64]
    tail: float = 0.0

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise DomainError(f"grid spacing must be positive, got {self.h}")
        object.__setattr__(self, "w", _frozen_array(self.w))
        if self.w.ndim != 1 or self.w.size < 2:
            raise DomainError("a weight set needs w_0 and at least one w_k")

    @property
    def m(self) -> int:
        return self.w.size - 1

    @property
    def w0(self) -> float:
        return float(self.w[0])

    def symmetric(self) -> npt.NDArray[np.float64]:
        """Full sequence w_{-m}, ..., w_0, ..., w_m."""
        return np.concatenate([self.w[:0:-1], self.w])

    def tail_sums(self, n: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Σ_{i >= n} w_i for integer n >= 1, continuing past m with the tail model."""
        idx = np.asarray(n, dtype=int)
        if np.any(idx < 1):
            raise DomainError("tail sums start at index 1")
        far = self.tail / self.h**self.alpha
        suffix = np.append(np.cumsum(self.w[:0:-1])[::-1], 0.0) + far
        out = np.empty(idx.shape, dtype=float)
        inside = idx <= self.m
        out[inside] = suffix[idx[inside] - 1]
        beyond = ~inside
        if beyond.any():
            if far == 0.0:
                out[beyond] = 0.0
            else:
                s = 1.0 + self.alpha
                out[beyond] = far * special.zeta(s, idx[beyond]) / special.zeta(s, self.m + 1)
        return out


@dataclass(frozen=True, eq=False)
class GridField:
    """Samples u[i] at x = (j0 + i) h on a finite window."""

    h: float
    j0: int
    u: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise DomainError(f"grid spacing must be positive, got {self.h}")
        object.__setattr__(self, "u", _frozen_array(self.u))
        if self.u.ndim != 1 or self.u.size == 0:
            raise DomainError("a grid field needs at least one sample")

    @classmethod
    def sample(
        cls,
        fn: Callable[[npt.NDArray[np.float64]], npt.ArrayLike],
        h: float,
        left: float,
        right: float,
    ) -> GridField:
        """Sample ``fn`` on every grid point of [left, right]."""
        j_lo = round(left / h)
        j_hi = round(right / h)
        x = np.arange(j_lo, j_hi + 1) * h
        return cls(h=h, j0=j_lo, u=np.asarray(fn(x), dtype=float))

    @property
    def n(self) -> int:
        return self.u.size

    @property
    def indices(self) -> npt.NDArray[np.int64]:
        return np.arange(self.j0, self.j0 + self.n)

    @property
    def x(self) -> npt.NDArray[np.float64]:
        return self.indices * self.h

    def with_values(self, u: npt.ArrayLike) -> GridField:
        return GridField(h=self.h, j0=self.j0, u=np.asarray(u, dtype=float))


@dataclass(frozen=True)
class ZeroExterior:
    """u = 0 outside the window."""

    def values(self, y: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return np.zeros_like(y, dtype=float)


@dataclass(frozen=True)
class ConstantExterior:
    """u equals ``left`` beyond the left edge and ``right`` beyond the right edge."""

    left: float = 0.0
    right: float = 0.0

    @classmethod
    def uniform(cls, c: float) -> ConstantExterior:
        return cls(left=c, right=c)

    def values(self, y: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return np.where(np.asarray(y) < 0, self.left, self.right).astype(float)


@dataclass(frozen=True)
class TailSpec:
    """Algebraic far field u(y) ~ c± + (u(±L) - c±)(L/|y|)^β outside [-L, L].

    ``L_M`` is the radius up to which exterior grid values are filled from
    the asymptote; beyond it the contribution is integrated in closed form.
    ``L_M >= 3L`` keeps the hypergeometric argument at most 1/3; pass
    ``allow_short=True`` to override.
    """

    beta: float
    L: float
    L_M: float
    u_left: float = 0.0
    u_right: float = 0.0
    offset_left: float = 0.0
    offset_right: float = 0.0
    allow_short: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise DomainError(f"tail decay exponent must be positive, got {self.beta}")
        if self.L <= 0:
            raise DomainError(f"window edge must be positive, got {self.L}")
        if self.L_M < self.L:
            raise DomainError(f"extension radius {self.L_M} is inside the window edge {self.L}")
        if not self.allow_short and self.L_M < 3.0 * self.L * (1.0 - 1e-12):
            raise DomainError(f"extension radius {self.L_M} below 3L = {3.0 * self.L}")

    def with_edges(self, u_left: float, u_right: float) -> TailSpec:
        return replace(self, u_left=float(u_left), u_right=float(u_right))

    def values(self, y: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        y = np.asarray(y, dtype=float)
        decay = (self.L / np.maximum(np.abs(y), self.L)) ** self.beta
        left = self.offset_left + (self.u_left - self.offset_left) * decay
        right = self.offset_right + (self.u_right - self.offset_right) * decay
        return np.where(y < 0, left, right)


Exterior = ZeroExterior | ConstantExterior | TailSpec

ZERO_EXTERIOR = ZeroExterior()
