"""Tests for :mod:`core.specfun`."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from core.errors import DomainError
from core.specfun import gamma, gauss_2f1, log_gamma, riesz_constant, upper_incomplete_gamma


def test_gamma_known_values() -> None:
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert gamma(0.5) == pytest.approx(1.7724538509055160, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_gamma_rejects_poles(x: float) -> None:
    with pytest.raises(DomainError):
        gamma(x)
    with pytest.raises(DomainError):
        log_gamma(x)


def test_gamma_reflection_and_duplication() -> None:
    rng = np.random.default_rng(0)
    for x in rng.uniform(0.01, 0.99, 50):
        assert gamma(x) * gamma(1 - x) * math.sin(math.pi * x) / math.pi == pytest.approx(1.0, abs=1e-12)
    for x in rng.uniform(0.1, 10.0, 50):
        lhs = gamma(x) * gamma(x + 0.5)
        rhs = 2 ** (1 - 2 * x) * math.sqrt(math.pi) * gamma(2 * x)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_log_gamma_matches_gamma_and_survives_large_arguments() -> None:
    assert log_gamma(10.5) == pytest.approx(math.log(gamma(10.5)), rel=1e-14)
    big = log_gamma(np.array([500.0, 1000.0]))
    assert np.all(np.isfinite(big))
    assert big[1] == pytest.approx(math.lgamma(1000.0), rel=1e-14)


def test_upper_incomplete_gamma_closed_forms() -> None:
    assert upper_incomplete_gamma(1.0, 1 + 0j) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert upper_incomplete_gamma(2.0, 1 + 0j) == pytest.approx(2.0 / math.e, rel=1e-12)
    assert upper_incomplete_gamma(0.7, 0j) == pytest.approx(gamma(0.7), rel=1e-14)


@pytest.mark.parametrize("a", [0.25, 1.0, 1.6, 2.5, 3.9])
def test_upper_incomplete_gamma_matches_mpmath_on_imaginary_axis(a: float) -> None:
    z = -1j * math.pi * np.array([0.1, 1.0, 3.0, 10.0, 100.0, 1e4])
    got = upper_incomplete_gamma(a, z)
    for zi, gi in zip(z, got, strict=True):
        expected = complex(mpmath.gammainc(a, complex(zi)))
        assert abs(gi - expected) <= 1e-10 * abs(expected)


def test_upper_incomplete_gamma_branches_agree_on_overlap() -> None:
    from core.specfun import _lower_series, _upper_continued_fraction

    a = 1.3
    radii = np.linspace(a + 1.0, a + 3.0, 9)
    z = radii * np.exp(-1j * np.linspace(0.2, 1.2, 9))
    series = gamma(a) - _lower_series(a, z.astype(complex))
    fraction = _upper_continued_fraction(a, z.astype(complex))
    np.testing.assert_allclose(series, fraction, rtol=1e-9)


def test_upper_incomplete_gamma_domain() -> None:
    with pytest.raises(DomainError):
        upper_incomplete_gamma(4.0, 1j)
    with pytest.raises(DomainError):
        upper_incomplete_gamma(1.0, complex(math.inf, 0))


def test_gauss_2f1_values() -> None:
    assert gauss_2f1(0.3, 0.7, 1.2, 0.0) == 1.0
    assert gauss_2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(2 * math.log(2), rel=1e-14)
    terms = [1.0]
    for n in range(200):
        terms.append(terms[-1] * (1.4 + n) * (1.0 + n) / ((2.0 + n) * (n + 1)) / 3.0)
    assert gauss_2f1(1.4, 1.0, 2.0, 1.0 / 3.0) == pytest.approx(math.fsum(terms), rel=1e-14)


def test_gauss_2f1_guards() -> None:
    with pytest.raises(DomainError):
        gauss_2f1(1.0, 1.0, 2.0, 0.95)
    with pytest.raises(DomainError):
        gauss_2f1(1.0, 1.0, -2.0, 0.1)


def test_riesz_constant() -> None:
    assert riesz_constant(1.0) == pytest.approx(1.0 / math.pi, rel=1e-14)
    assert riesz_constant(1e-8) == pytest.approx(0.0, abs=1e-7)
    for alpha in (0.3, 0.5, 1.5, 1.9):
        c = riesz_constant(alpha)
        assert c == pytest.approx(gamma(1 + alpha) * math.sin(alpha * math.pi / 2) / math.pi, rel=1e-12)
        assert c == pytest.approx(alpha / (2 * math.cos(alpha * math.pi / 2) * gamma(1 - alpha)), rel=1e-12)
    with pytest.raises(DomainError):
        riesz_constant(2.0)
