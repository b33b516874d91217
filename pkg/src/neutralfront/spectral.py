"""Characteristic functions of the wave profile equation and their real zeros.

chi0 governs the exponential behaviour of the profile at -infinity (its
positive zeros lambda2 <= lambda1), chi1 the behaviour at +infinity (its
negative zeros mu2 <= mu1).  Both are analytic for Re z > ln(b)/(c*tau).
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .params import DomainError, ModelParams, NumericsError

ROOT_TOL = 1e-12
CRIT_TOL = 1e-8
STRIP_GUARD = 1e-8


@dataclass(frozen=True)
class SpectralRoots:
    """Real zeros of the two characteristic functions, when they exist."""

    lambda1: Optional[float] = None
    lambda2: Optional[float] = None
    mu1: Optional[float] = None
    mu2: Optional[float] = None
    critical_chi0: bool = False
    critical_chi1: bool = False

    @property
    def has_chi0_roots(self) -> bool:
        return self.lambda1 is not None

    @property
    def has_chi1_roots(self) -> bool:
        return self.mu1 is not None


def strip_edge(p: ModelParams) -> float:
    """Left edge ln(b)/(c*tau) of the analyticity strip (-inf for b = 0)."""
    if p.b == 0.0:
        return -math.inf
    return math.log(p.b) / p.ctau


def _check_strip(z, p: ModelParams):
    edge = strip_edge(p)
    if edge == -math.inf:
        return
    if np.any(np.asarray(z) - edge < STRIP_GUARD):
        raise DomainError(
            f"z within {STRIP_GUARD} of the analyticity edge ln(b)/(c tau) = {edge}"
        )


def chi0(z, p: ModelParams):
    """chi0(z) = z^2 - c z + 1/(1 - b e^{-z c tau}).  Accepts scalars or arrays."""
    _check_strip(z, p)
    z = np.asarray(z, dtype=float)
    den = 1.0 - p.b * np.exp(-z * p.ctau)
    out = z * z - p.c * z + 1.0 / den
    return out if out.ndim else float(out)


def chi1(z, p: ModelParams):
    """chi1(z) = z^2 - c z - e^{-z c tau}/(1 - b e^{-z c tau})."""
    _check_strip(z, p)
    z = np.asarray(z, dtype=float)
    ez = np.exp(-z * p.ctau)
    den = 1.0 - p.b * ez
    out = z * z - p.c * z - ez / den
    return out if out.ndim else float(out)


def chi0_prime(z, p: ModelParams):
    _check_strip(z, p)
    z = np.asarray(z, dtype=float)
    ez = np.exp(-z * p.ctau)
    den = 1.0 - p.b * ez
    out = 2.0 * z - p.c - p.b * p.ctau * ez / (den * den)
    return out if out.ndim else float(out)


def chi1_prime(z, p: ModelParams):
    _check_strip(z, p)
    z = np.asarray(z, dtype=float)
    ez = np.exp(-z * p.ctau)
    den = 1.0 - p.b * ez
    out = 2.0 * z - p.c + p.ctau * ez / (den * den)
    return out if out.ndim else float(out)


def _verify_convexity(p: ModelParams, z_hi: float):
    """Sampled second differences of chi0 on (0, z_hi]; the root isolation
    below relies on convexity, so a violation aborts loudly."""
    zs = np.linspace(1e-6, z_hi, 64)
    vals = chi0(zs, p)
    d2 = vals[2:] - 2.0 * vals[1:-1] + vals[:-2]
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.min(d2) < -1e-9 * scale:
        raise NumericsError(
            f"chi0 convexity check failed on (0, {z_hi}]: min second difference {np.min(d2)}"
        )


def chi0_minimum(p: ModelParams) -> Tuple[float, float]:
    """Interior minimizer of chi0 on z > 0 and the value there.

    chi0' = 2z - c - (positive term), so chi0' < 0 on (0, c/2] and the
    minimizer lies to the right of c/2; bracket it by doubling.
    """
    if p.b == 0.0:
        zm = p.c / 2.0
        return zm, chi0(zm, p)
    lo = p.c / 2.0
    step = max(1.0, p.c)
    hi = lo + step
    for _ in range(200):
        if chi0_prime(hi, p) > 0.0:
            break
        hi += step
        step *= 2.0
    else:
        raise NumericsError("could not bracket the chi0 minimizer")
    zm = brentq(lambda z: chi0_prime(z, p), lo, hi, xtol=1e-15, rtol=8.9e-16)
    return zm, chi0(zm, p)


def chi0_positive_roots(
    p: ModelParams, root_tol: float = ROOT_TOL, crit_tol: float = CRIT_TOL
) -> Optional[Tuple[float, float, bool]]:
    """Both positive zeros (lambda2, lambda1, critical) of chi0, or None.

    Roots are absent when the interior minimum of chi0 is positive; a minimum
    within crit_tol of zero is reported as a critical double root.
    """
    zmin, vmin = chi0_minimum(p)
    _verify_convexity(p, 2.0 * zmin)
    if vmin > crit_tol:
        return None
    if abs(vmin) <= crit_tol:
        return zmin, zmin, True
    # chi0(0+) = 1/(1-b) > 0, chi0 -> +inf on the right: one root each side.
    lo = 1e-300
    lam2 = brentq(lambda z: chi0(z, p), lo, zmin, xtol=1e-15, rtol=8.9e-16)
    hi = 2.0 * zmin
    for _ in range(200):
        if chi0(hi, p) > 0.0:
            break
        hi *= 2.0
    else:
        raise NumericsError("could not bracket the right chi0 root")
    lam1 = brentq(lambda z: chi0(z, p), zmin, hi, xtol=1e-15, rtol=8.9e-16)
    return lam2, lam1, False


def _chi1_interval(p: ModelParams) -> Tuple[float, float]:
    """Search interval for the negative zeros, clipped inside the strip."""
    hi = -1e-14
    if p.b > 0.0:
        edge = strip_edge(p)
        # keep clear of both the relative clip and the absolute strip guard
        return edge + max(1e-6 * abs(edge), 2.0 * STRIP_GUARD), hi
    # b = 0: extend left until the exponential term clearly dominates.
    lo = -1.0
    for _ in range(200):
        if chi1(lo, p) < -1.0 and chi1(lo, p) < chi1(lo / 2.0, p):
            return lo, hi
        lo *= 2.0
    raise NumericsError("could not bracket the chi1 maximum region")


def chi1_maximum(p: ModelParams, samples: int = 2048) -> Tuple[float, float]:
    """Interior maximizer of chi1 on the negative search interval.

    chi1 need not be convex, so locate the maximum by dense sampling and
    refine by bisecting chi1' inside the bracketing cell (golden-section
    fallback when the sampled bracket is degenerate).
    """
    lo, hi = _chi1_interval(p)
    if lo >= hi:
        # the strip has shrunk below the guard width: no room for real zeros
        return hi, -math.inf
    for _ in range(60):
        zs = np.linspace(lo, hi, samples)
        vals = chi1(zs, p)
        i = int(np.argmax(vals))
        if i > 0 or p.b > 0.0:
            break
        lo *= 2.0  # maximum sits at the left edge: widen (b = 0 only)
    a = zs[max(i - 1, 0)]
    b = zs[min(i + 1, samples - 1)]
    if chi1_prime(a, p) > 0.0 > chi1_prime(b, p):
        zm = brentq(lambda z: chi1_prime(z, p), a, b, xtol=1e-15, rtol=8.9e-16)
    else:
        from scipy.optimize import minimize_scalar

        res = minimize_scalar(
            lambda z: -chi1(z, p), bounds=(a, b), method="bounded",
            options={"xatol": 1e-14},
        )
        zm = float(res.x)
    return zm, chi1(zm, p)


def chi1_negative_roots(
    p: ModelParams, root_tol: float = ROOT_TOL, crit_tol: float = CRIT_TOL
) -> Optional[Tuple[float, float, bool]]:
    """Both negative zeros (mu2, mu1, critical) of chi1, or None.

    chi1 tends to -inf at both ends of the search interval and chi1(0-) < 0,
    so roots exist exactly when the interior maximum is nonnegative.
    """
    zmax, vmax = chi1_maximum(p)
    if vmax < -crit_tol:
        return None
    if abs(vmax) <= crit_tol:
        return zmax, zmax, True
    lo, hi = _chi1_interval(p)
    if p.b == 0.0:
        while lo >= zmax or chi1(lo, p) >= 0.0:
            lo *= 2.0
    mu2 = brentq(lambda z: chi1(z, p), lo, zmax, xtol=1e-15, rtol=8.9e-16)
    mu1 = brentq(lambda z: chi1(z, p), zmax, hi, xtol=1e-15, rtol=8.9e-16)
    return mu2, mu1, False


def find_roots(p: ModelParams) -> SpectralRoots:
    """Locate all relevant real characteristic roots for the parameter triple."""
    r0 = chi0_positive_roots(p)
    r1 = chi1_negative_roots(p)
    kw = {}
    if r0 is not None:
        kw.update(lambda2=r0[0], lambda1=r0[1], critical_chi0=r0[2])
    if r1 is not None:
        kw.update(mu2=r1[0], mu1=r1[1], critical_chi1=r1[2])
    return SpectralRoots(**kw)
