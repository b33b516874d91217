"""Discrete shift / resolvent operators and the profile file format."""

import io
import math

import numpy as np
import pytest

from neutralfront.gridops import (
    GridProfile,
    make_config,
    op_F,
    op_L,
    qm_defect,
    read_profile,
    resolvent_B,
    shift,
    write_profile,
)
from neutralfront.params import DomainError, ModelParams

P = ModelParams(b=0.2, tau=0.2, c=3.0)
CFG = make_config(P, m=16)


def _grid(values, left_rate=0.0, right_value=None):
    vals = np.asarray(values, dtype=float)
    rv = float(vals[-1]) if right_value is None else right_value
    return GridProfile(
        t_start=-3.0, dt=P.ctau / CFG.m, values=vals, left_rate=left_rate, right_value=rv
    )


def test_truncation_depth():
    # geometric tail b^{J+1} below trunc_tol
    assert P.b ** (CFG.J + 1) < P.trunc_tol
    assert P.b ** CFG.J >= P.trunc_tol
    assert make_config(ModelParams(b=0.0, tau=0.2, c=3.0), m=16).J == 0


def test_shift_is_exact_index_offset():
    n = 200
    v = np.sin(np.linspace(0.0, 4.0, n))
    g = _grid(v, left_rate=1.0)
    s = shift(g, P, CFG)
    assert np.array_equal(s.values[CFG.m :], v[: -CFG.m])
    # off-grid left reads use the exponential extension with g's rate
    t_off = g.t_start + g.dt * np.arange(CFG.m) - P.ctau
    expected = v[0] * np.exp(1.0 * (t_off - g.t_start))
    assert np.allclose(s.values[: CFG.m], expected, rtol=1e-13)


def test_resolvent_is_linear():
    rng = np.random.default_rng(7)
    n = 150
    f = _grid(rng.standard_normal(n))
    g = _grid(rng.standard_normal(n))
    both = _grid(2.0 * f.values + 3.0 * g.values)
    lhs = resolvent_B(both, P, CFG).values
    rhs = 2.0 * resolvent_B(f, P, CFG).values + 3.0 * resolvent_B(g, P, CFG).values
    assert np.allclose(lhs, rhs, rtol=1e-13, atol=1e-13)


def test_resolvent_closed_form_on_exponential():
    """B e^{zt} = e^{zt} / (1 - b e^{-z c tau}) for z above the strip edge."""
    z = 0.8
    n = 400
    t = -3.0 + (P.ctau / CFG.m) * np.arange(n)
    g = _grid(np.exp(z * t), left_rate=z)
    bg = resolvent_B(g, P, CFG).values
    factor = 1.0 / (1.0 - P.b * math.exp(-z * P.ctau))
    assert np.allclose(bg, factor * g.values, rtol=1e-12)


def test_resolvent_inverts_i_minus_bs():
    rng = np.random.default_rng(11)
    g = _grid(rng.uniform(0.0, 1.0, 300), left_rate=0.5)
    bg = resolvent_B(g, P, CFG)
    back = bg.values - P.b * shift(bg, P, CFG).values
    # the truncated series leaves an O(b^{J+1}) defect
    assert np.max(np.abs(back - g.values)) < 10.0 * P.trunc_tol


def test_op_f_on_constants():
    """F(const k) = k/(1-b) (1 - k): zeros exactly at the equilibria 0 and 1."""
    for k in (0.0, 0.3, 1.0):
        g = _grid(np.full(100, k))
        fv = op_F(g, P, CFG).values
        expected = k / (1.0 - P.b) * (1.0 - k)
        assert np.allclose(fv, expected, atol=1e-12)


def test_qm_defect_ordered_pair():
    rng = np.random.default_rng(3)
    lo = np.sort(rng.uniform(0.0, 0.5, 220))
    hi = np.clip(lo + rng.uniform(0.0, 0.4, 220), None, 1.0)
    d = qm_defect(_grid(lo), _grid(hi), P, CFG)
    assert d >= -1e-12


def test_qm_defect_rejects_unordered():
    with pytest.raises(DomainError):
        qm_defect(_grid(np.full(50, 0.6)), _grid(np.full(50, 0.4)), P, CFG)


def test_misaligned_grid_rejected():
    g = GridProfile(t_start=0.0, dt=0.01, values=np.zeros(50))
    with pytest.raises(DomainError):
        op_L(g, P, CFG)


def test_profile_roundtrip():
    rng = np.random.default_rng(5)
    g = _grid(rng.uniform(0.0, 1.0, 64), left_rate=0.464, right_value=1.0)
    buf = io.StringIO()
    write_profile(buf, g, P, CFG)
    buf.seek(0)
    g2, p2, cfg2 = read_profile(buf)
    assert np.array_equal(g.values, g2.values)
    assert g2.t_start == g.t_start and g2.dt == g.dt
    assert g2.left_rate == g.left_rate and g2.right_value == g.right_value
    assert (p2.b, p2.tau, p2.c) == (P.b, P.tau, P.c)
    assert cfg2.m == CFG.m


def test_profile_header_validation():
    buf = io.StringIO("# b=0.2\n0.0,0.5\n")
    with pytest.raises(DomainError):
        read_profile(buf)
