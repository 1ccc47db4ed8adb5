"""Convergence-rate estimation from (h, error) sequences."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from core.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

# A saturated run keeps only points whose error exceeds this multiple of the final error.
SATURATION_FACTOR = 3.0


def observed_rates(h: Sequence[float], err: Sequence[float]) -> npt.NDArray[np.float64]:
    """Pairwise rates log(e_i/e_{i-1}) / log(h_i/h_{i-1}); the first entry is 0."""
    hs = np.asarray(h, dtype=float)
    es = np.asarray(err, dtype=float)
    rates = np.zeros(hs.size)
    rates[1:] = np.log(es[1:] / es[:-1]) / np.log(hs[1:] / hs[:-1])
    return rates


def pre_saturation_window(err: Sequence[float]) -> range:
    """Leading points that still show convergence.

    The window is the strictly decreasing prefix of the errors. If the
    errors stop decreasing somewhere, the run has saturated and the window
    further drops points within 3x of the final error.
    """
    es = np.asarray(err, dtype=float)
    stop = 1
    while stop < es.size and es[stop] < es[stop - 1]:
        stop += 1
    if stop < es.size:
        above = np.nonzero(es[:stop] > SATURATION_FACTOR * es[-1])[0]
        stop = int(above[-1]) + 1 if above.size else 0
    return range(0, stop)


def fit_slope(h: Sequence[float], err: Sequence[float]) -> tuple[float, range]:
    """Least-squares slope of log(err) against log(h) on the pre-saturation window."""
    hs = np.asarray(h, dtype=float)
    es = np.asarray(err, dtype=float)
    if hs.size != es.size:
        raise DomainError("h and error sequences differ in length")
    if np.any(np.diff(hs) >= 0):
        raise DomainError("grid sizes must be strictly decreasing")
    if np.any(es <= 0) or not np.all(np.isfinite(es)):
        raise NumericalError("errors must be positive and finite to fit a rate")
    window = pre_saturation_window(es)
    if len(window) < 2:
        raise NumericalError("fewer than two pre-saturation points; no slope to fit")
    sl = slice(window.start, window.stop)
    slope, _ = np.polyfit(np.log(hs[sl]), np.log(es[sl]), 1)
    logger.debug("fitted slope %.4f on points %d..%d", slope, window.start, window.stop - 1)
    return float(slope), window
