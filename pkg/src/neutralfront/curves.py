"""Critical-speed curves in the (tau, c) plane and the existence domain.

c_star(tau) is the smallest speed at which chi0 acquires positive real zeros,
c_hash(tau) the largest speed (beyond the threshold delay tau_critical(b)) at
which chi1 keeps negative real zeros.  Monotone fronts exist exactly when
both root conditions hold.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from scipy.optimize import brentq

from .params import DomainError, ModelParams, NumericsError
from .spectral import (
    SpectralRoots,
    chi0_minimum,
    chi1_maximum,
    find_roots,
)

CURVE_TOL = 1e-10


@dataclass(frozen=True)
class CurveSample:
    """A point (tau, c) on a critical curve together with its double root."""

    tau: float
    c: float
    double_root: float


@dataclass(frozen=True)
class DomainVerdict:
    in_domain: bool
    roots: SpectralRoots
    c_star_at_tau: float
    c_hash_at_tau: Optional[float]
    tau_critical: float


def _chi0_has_roots(tau: float, b: float, c: float) -> bool:
    p = ModelParams(b=b, tau=tau, c=c)
    _, vmin = chi0_minimum(p)
    return vmin <= 0.0


def _chi1_has_roots(tau: float, b: float, c: float) -> bool:
    p = ModelParams(b=b, tau=tau, c=c)
    _, vmax = chi1_maximum(p)
    return vmax >= 0.0


def c_star(tau: float, b: float, curve_tol: float = CURVE_TOL) -> CurveSample:
    """Critical speed for chi0: roots exist iff c >= c_star(tau).

    Bisection on the root-existence predicate over [2, 2(1-b)^{-1/2}].
    """
    if tau <= 0.0 or not (0.0 <= b < 1.0):
        raise DomainError(f"need tau > 0 and 0 <= b < 1, got tau={tau}, b={b}")
    if b == 0.0:
        return CurveSample(tau=tau, c=2.0, double_root=1.0)
    lo, hi = 2.0, 2.0 / math.sqrt(1.0 - b)
    if _chi0_has_roots(tau, b, lo):
        # c_star(tau) -> 2 as tau -> infinity; the bracket has collapsed.
        zmin, _ = chi0_minimum(ModelParams(b=b, tau=tau, c=lo))
        return CurveSample(tau=tau, c=lo, double_root=zmin)
    if not _chi0_has_roots(tau, b, hi):
        raise NumericsError("chi0 root-existence predicate false at c = 2(1-b)^{-1/2}")
    while hi - lo > curve_tol:
        mid = 0.5 * (lo + hi)
        if _chi0_has_roots(tau, b, mid):
            hi = mid
        else:
            lo = mid
    zmin, _ = chi0_minimum(ModelParams(b=b, tau=tau, c=hi))
    return CurveSample(tau=tau, c=hi, double_root=zmin)


def tau_critical(b: float) -> float:
    """Threshold delay below which chi1 has negative zeros at every speed.

    Parametric form tau = sigma^2 e^{-sigma}, b = (1-sigma) e^{-sigma} with
    sigma in (0, 1); invert the (strictly decreasing) second relation.
    """
    if not (0.0 <= b < 1.0):
        raise DomainError(f"need 0 <= b < 1, got {b}")
    if b == 0.0:
        return 1.0 / math.e
    sigma = brentq(
        lambda s: (1.0 - s) * math.exp(-s) - b, 0.0, 1.0, xtol=1e-16, rtol=8.9e-16
    )
    return sigma * sigma * math.exp(-sigma)


def c_hash(
    tau: float, b: float, curve_tol: float = CURVE_TOL
) -> Optional[CurveSample]:
    """Critical speed for chi1: for tau > tau_critical(b), roots exist iff
    c <= c_hash(tau).  Returns None below the threshold (all speeds admissible).
    """
    if tau <= 0.0 or not (0.0 <= b < 1.0):
        raise DomainError(f"need tau > 0 and 0 <= b < 1, got tau={tau}, b={b}")
    if tau <= tau_critical(b):
        return None
    hi = 1.0 / 16.0
    while _chi1_has_roots(tau, b, hi):
        hi *= 2.0
        if hi > 2.0**64:
            raise NumericsError("c_hash doubling bracket exceeded 2^64 (unbounded)")
    lo = hi / 2.0
    while not _chi1_has_roots(tau, b, lo):
        lo /= 2.0
        if lo < 1e-300:
            raise NumericsError("no admissible speed found for c_hash")
    while hi - lo > curve_tol:
        mid = 0.5 * (lo + hi)
        if _chi1_has_roots(tau, b, mid):
            lo = mid
        else:
            hi = mid
    zmax, _ = chi1_maximum(ModelParams(b=b, tau=tau, c=lo))
    return CurveSample(tau=tau, c=lo, double_root=zmax)


def in_domain(p: ModelParams) -> DomainVerdict:
    """Membership of (tau, c) in the wavefront existence domain."""
    roots = find_roots(p)
    tc = tau_critical(p.b)
    cs = c_star(p.tau, p.b)
    ch = c_hash(p.tau, p.b) if p.tau > tc else None
    return DomainVerdict(
        in_domain=roots.has_chi0_roots and roots.has_chi1_roots,
        roots=roots,
        c_star_at_tau=cs.c,
        c_hash_at_tau=None if ch is None else ch.c,
        tau_critical=tc,
    )


def intersection(b: float, tol: float = 1e-9) -> Tuple[float, float]:
    """The unique crossing (tau0, c0) of the two critical curves.

    Bisection on the sign of c_star(tau) - c_hash(tau); negative just above
    the threshold delay (c_hash blows up there), positive for large tau.
    """
    if not (0.0 < b < 1.0):
        raise DomainError(f"need 0 < b < 1, got {b}")

    def gap(tau: float) -> float:
        ch = c_hash(tau, b)
        assert ch is not None
        return c_star(tau, b).c - ch.c

    lo = tau_critical(b) * (1.0 + 1e-6)
    if gap(lo) >= 0.0:
        raise NumericsError("curve gap not negative just above the threshold delay")
    hi = 2.0 * lo
    for _ in range(64):
        if gap(hi) > 0.0:
            break
        hi *= 2.0
        if hi > 2.0**16:
            raise NumericsError("no sign change found for the curve intersection")
    else:
        raise NumericsError("no sign change found for the curve intersection")
    while True:
        mid = 0.5 * (lo + hi)
        g = gap(mid)
        if abs(g) <= tol or hi - lo < 1e-13 * max(1.0, mid):
            return mid, c_star(mid, b).c
        if g < 0.0:
            lo = mid
        else:
            hi = mid


def curve_ode_check(b: float, tau: float) -> Tuple[float, float]:
    """Relative defect of the differential identities obeyed by both curves.

    c' = -c/tau + c^2/(2 z tau) with z the double root (lambda2 for c_star,
    mu2 for c_hash); the curve derivative is approximated centrally.
    """
    if tau <= tau_critical(b):
        raise DomainError("both curves exist only for tau > tau_critical(b)")
    h = 1e-5 * tau

    cs = c_star(tau, b)
    fd_star = (c_star(tau + h, b).c - c_star(tau - h, b).c) / (2.0 * h)
    rhs_star = -cs.c / tau + cs.c**2 / (2.0 * cs.double_root * tau)
    defect_star = abs(fd_star - rhs_star) / abs(rhs_star)

    ch = c_hash(tau, b)
    chp = c_hash(tau + h, b)
    chm = c_hash(tau - h, b)
    if ch is None or chp is None or chm is None:
        raise NumericsError("c_hash vanished inside the identity check window")
    fd_hash = (chp.c - chm.c) / (2.0 * h)
    rhs_hash = -ch.c / tau + ch.c**2 / (2.0 * ch.double_root * tau)
    defect_hash = abs(fd_hash - rhs_hash) / abs(rhs_hash)
    return defect_star, defect_hash


def wu_zou_bound(tau: float, c: float) -> bool:
    """Classical applicability bound c*tau <= 1/e of the order-based method."""
    if tau <= 0.0 or c <= 0.0:
        raise DomainError("need tau > 0 and c > 0")
    return c * tau <= 1.0 / math.e
