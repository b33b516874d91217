"""Characteristic functions and root finding."""

import math

import numpy as np
import pytest

from neutralfront.params import DomainError, ModelParams
from neutralfront.spectral import (
    chi0,
    chi0_positive_roots,
    chi1,
    chi1_negative_roots,
    find_roots,
    strip_edge,
)

# high-precision reference values (40-digit arithmetic, frozen)
CHI0_REF = -0.17825865458816937463  # chi0(0.5) at b=0.3, tau=1, c=3
CHI1_REF = -1.2998390702115199186  # chi1(-0.4) at b=0.2, tau=0.5, c=2.5


def test_chi0_frozen_value():
    p = ModelParams(b=0.3, tau=1.0, c=3.0)
    assert chi0(0.5, p) == pytest.approx(CHI0_REF, abs=1e-15)


def test_chi1_frozen_value():
    p = ModelParams(b=0.2, tau=0.5, c=2.5)
    assert chi1(-0.4, p) == pytest.approx(CHI1_REF, abs=1e-15)


def test_vectorized_matches_scalar():
    p = ModelParams(b=0.25, tau=0.7, c=2.8)
    zs = np.linspace(-0.3, 3.0, 17)
    assert np.allclose(chi0(zs, p), [chi0(float(z), p) for z in zs], rtol=0, atol=0)
    assert np.allclose(chi1(zs, p), [chi1(float(z), p) for z in zs], rtol=0, atol=0)


def test_strip_guard_rejects_edge():
    p = ModelParams(b=0.5, tau=1.0, c=2.0)
    edge = strip_edge(p)
    with pytest.raises(DomainError):
        chi0(edge, p)
    with pytest.raises(DomainError):
        chi1(edge + 1e-12, p)
    # b = 0: entire real line is fine
    p0 = ModelParams(b=0.0, tau=1.0, c=2.0)
    assert math.isfinite(chi0(-50.0, p0))


def test_b0_quadratic_reduction():
    """chi0 at b = 0 is the KPP quadratic z^2 - cz + 1."""
    p = ModelParams(b=0.0, tau=0.4, c=3.0)
    r = chi0_positive_roots(p)
    assert r is not None
    lam2, lam1, crit = r
    assert not crit
    disc = math.sqrt(9.0 - 4.0)
    assert lam2 == pytest.approx((3.0 - disc) / 2.0, abs=1e-13)
    assert lam1 == pytest.approx((3.0 + disc) / 2.0, abs=1e-13)


def test_b0_critical_double_root():
    p = ModelParams(b=0.0, tau=0.3, c=2.0)
    r = chi0_positive_roots(p)
    assert r == (1.0, 1.0, True)


def test_roots_are_residual_zeros_random():
    rng = np.random.default_rng(20260823)
    checked = 0
    for _ in range(40):
        b = float(rng.uniform(0.0, 0.8))
        tau = float(rng.uniform(0.05, 2.0))
        c = float(rng.uniform(1.5, 6.0))
        p = ModelParams(b=b, tau=tau, c=c)
        roots = find_roots(p)
        if roots.has_chi0_roots and not roots.critical_chi0:
            assert abs(chi0(roots.lambda2, p)) < 1e-10
            assert abs(chi0(roots.lambda1, p)) < 1e-10
            assert 0.0 < roots.lambda2 <= roots.lambda1
            checked += 1
        if roots.has_chi1_roots and not roots.critical_chi1:
            assert abs(chi1(roots.mu1, p)) < 1e-10
            assert abs(chi1(roots.mu2, p)) < 1e-10
            assert roots.mu2 <= roots.mu1 < 0.0
            checked += 1
    assert checked >= 20  # the sample must actually exercise both branches


def test_no_roots_below_critical_speed():
    # c = 1.9 < 2 <= c_star: no positive chi0 zeros for any b, tau
    p = ModelParams(b=0.2, tau=0.5, c=1.9)
    assert chi0_positive_roots(p) is None


def test_chi1_roots_vanish_beyond_c_hash():
    # tau = 1 > tau_critical(0): zeros exist at small c, not at large c
    assert chi1_negative_roots(ModelParams(b=0.0, tau=1.0, c=0.5)) is not None
    assert chi1_negative_roots(ModelParams(b=0.0, tau=1.0, c=1.5)) is None
