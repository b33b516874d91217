"""Explicit super- and sub-solutions sandwiching the wavefront.

The super-solution glues 1 - e^{mu1 t} (right) to a e^{lambda2 t} (left) with
a C^1 match at zeta; the sub-solution is the standard a e^{lambda2 t}
(1 - M e^{eps t}) ansatz cut off at its zero crossing xi.  Both require a
noncritical point of the existence domain (c > c_star(tau)).
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .gridops import GridProfile, OperatorConfig, op_F, check_aligned
from .params import DomainError, ModelParams, NumericsError
from .spectral import SpectralRoots, chi0

CHI0_MARGIN = 1e-6


@dataclass(frozen=True)
class SuperSolution:
    a: float
    zeta: float
    lambda2: float
    mu1: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(
            t >= self.zeta,
            1.0 - np.exp(self.mu1 * t),
            self.a * np.exp(self.lambda2 * np.minimum(t, self.zeta)),
        )
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SubSolution:
    eps: float
    M: float
    xi: float
    a: float
    lambda2: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        body = self.a * np.exp(self.lambda2 * t) * (
            1.0 - np.exp(math.log(self.M) + self.eps * t)
        )
        out = np.maximum(0.0, np.where(t <= self.xi, body, 0.0))
        return out if out.ndim else float(out)


def wave_grid(p: ModelParams, cfg: OperatorConfig, T: float) -> Tuple[float, float, int]:
    """Aligned symmetric grid covering [-T', T'] with T' = ceil(T/dt)*dt."""
    dt = p.ctau / cfg.m
    half = int(math.ceil(T / dt))
    return -half * dt, dt, 2 * half + 1


def build_super(
    roots: SpectralRoots,
    p: ModelParams,
    cfg: OperatorConfig,
    T: float,
    translate: float = 0.0,
) -> Tuple[SuperSolution, GridProfile]:
    """Closed-form C^1 matching: zeta = ln(lambda2/(lambda2-mu1))/mu1 and
    a = (1 - e^{mu1 zeta}) e^{-lambda2 zeta}.

    ``translate`` renders phi_+(t - translate), still a super-solution.
    """
    if not (roots.has_chi0_roots and roots.has_chi1_roots):
        raise DomainError("outside the existence domain: missing characteristic roots")
    if roots.critical_chi0:
        raise DomainError("critical speed c = c_star(tau): no strict sandwich exists")
    lam2, mu1 = roots.lambda2, roots.mu1
    zeta = math.log(lam2 / (lam2 - mu1)) / mu1
    a = (1.0 - math.exp(mu1 * zeta)) * math.exp(-lam2 * zeta)
    sup = SuperSolution(a=a, zeta=zeta, lambda2=lam2, mu1=mu1)
    t_start, dt, n = wave_grid(p, cfg, T)
    t = t_start + dt * np.arange(n)
    vals = sup(t - translate)
    g = GridProfile(
        t_start=t_start,
        dt=dt,
        values=vals,
        left_rate=lam2,
        right_value=float(vals[-1]),
    )
    return sup, g


def build_sub(
    sup: SuperSolution,
    roots: SpectralRoots,
    p: ModelParams,
    cfg: OperatorConfig,
    T: float,
) -> Tuple[SubSolution, GridProfile]:
    """Pick eps inside the root gap with a safety margin on chi0(lambda2+eps),
    then grow M (powers of two) until the sign margin of the sub-solution
    inequality holds with a factor-2 cushion and the sandwich is respected.
    """
    lam2, lam1 = roots.lambda2, roots.lambda1
    eps = min(lam2, lam1 - lam2) / 2.0
    while eps > 1e-12 and chi0(lam2 + eps, p) > -CHI0_MARGIN:
        eps *= 0.5
    if eps <= 1e-12:
        raise NumericsError("could not place lambda2 + eps inside the chi0 root gap")
    neg_chi = -chi0(lam2 + eps, p)
    den = 1.0 - p.b * math.exp(-lam2 * p.ctau)
    coef = sup.a * (1.0 - p.b) * math.exp(-lam2 * p.ctau) / (den * den)

    t_start, dt, n = wave_grid(p, cfg, T)
    t = t_start + dt * np.arange(n)
    sup_vals = sup(t)

    M = 2.0
    for _ in range(200):
        expo = -(lam2 / eps) * math.log(M)
        penalty = coef * math.exp(expo) if expo > -700.0 else 0.0
        sub = SubSolution(eps=eps, M=M, xi=-math.log(M) / eps, a=sup.a, lambda2=lam2)
        if neg_chi - 2.0 * penalty > 0.0 and np.all(sub(t) <= sup_vals):
            break
        M *= 2.0
    else:
        raise NumericsError("no amplitude M satisfies the sub-solution margin")
    g = GridProfile(
        t_start=t_start,
        dt=dt,
        values=sub(t),
        left_rate=lam2,
        right_value=0.0,
    )
    return sub, g


def residual_pew(g: GridProfile, p: ModelParams, cfg: OperatorConfig) -> GridProfile:
    """Pointwise residual g'' - c g' + (Bg)(1 - (1-b)(SBg)) with 2nd-order
    centered differences (one-sided at the two endpoints)."""
    check_aligned(g, p, cfg)
    v = g.values
    if g.n < 4:
        raise DomainError("need at least 4 grid points for the residual stencils")
    dt = g.dt
    d1 = np.empty_like(v)
    d2 = np.empty_like(v)
    d1[1:-1] = (v[2:] - v[:-2]) / (2.0 * dt)
    d2[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (dt * dt)
    d1[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt)
    d1[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * dt)
    d2[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (dt * dt)
    d2[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / (dt * dt)
    reaction = op_F(g, p, cfg).values
    from dataclasses import replace

    return replace(g, values=d2 - p.c * d1 + reaction, left_rate=0.0, right_value=0.0)


def super_sign_tolerance(sup: SuperSolution, dt: float) -> float:
    """Discretization budget for the super-solution certificate."""
    d3 = max(
        sup.a * sup.lambda2**3 * math.exp(sup.lambda2 * sup.zeta),
        abs(sup.mu1) ** 3 * math.exp(sup.mu1 * sup.zeta),
    )
    return max(1e-10, 10.0 * dt * dt * d3)


def sub_sign_tolerance(sub: SubSolution, dt: float) -> float:
    """Discretization budget for the sub-solution certificate."""
    lam = sub.lambda2
    d3 = sub.a * math.exp(lam * sub.xi) * (lam**3 + (lam + sub.eps) ** 3)
    return max(1e-10, 10.0 * dt * dt * d3)
