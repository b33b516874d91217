"""Grid profiles and the discrete shift / resolvent / reaction operators.

All delayed evaluations land exactly on grid nodes because the step is tied
to the delay, dt = c*tau/m.  Reads left of the grid use an exponential
extension with the profile's own rate (the true tail behaviour of wave
iterates); reads right of the grid use a constant clamp.
"""

import math
from dataclasses import dataclass, replace
from typing import TextIO

import numpy as np

from .params import DomainError, ModelParams


@dataclass(frozen=True)
class GridProfile:
    """Uniform-grid real function with tail-extension policy."""

    t_start: float
    dt: float
    values: np.ndarray
    left_rate: float = 0.0
    right_value: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if not np.all(np.isfinite(vals)):
            raise DomainError("profile values must be finite")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def t(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.t_start + self.dt * (self.n - 1)

    def sample(self, t: np.ndarray) -> np.ndarray:
        """Values at arbitrary times: linear interpolation on the grid,
        extension policy outside it."""
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.t, self.values)
        left = t < self.t_start
        if np.any(left):
            out = np.where(
                left,
                self.values[0] * np.exp(self.left_rate * (t - self.t_start)),
                out,
            )
        out = np.where(t > self.t_end, self.right_value, out)
        return out


@dataclass(frozen=True)
class OperatorConfig:
    """Steps per delay and the geometric-series truncation depth."""

    m: int
    J: int
    trunc_tol: float


def make_config(p: ModelParams, m: int = 16) -> OperatorConfig:
    """Truncation depth from the geometric tail bound b^{J+1} < trunc_tol."""
    if m < 1:
        raise DomainError(f"steps per delay must be >= 1, got {m}")
    if p.b == 0.0:
        J = 0
    else:
        J = max(0, math.ceil(math.log(p.trunc_tol) / math.log(p.b)) - 1)
        while p.b ** (J + 1) >= p.trunc_tol:
            J += 1
    return OperatorConfig(m=m, J=J, trunc_tol=p.trunc_tol)


def check_aligned(g: GridProfile, p: ModelParams, cfg: OperatorConfig):
    if abs(g.dt * cfg.m - p.ctau) > 1e-12 * max(1.0, p.ctau):
        raise DomainError(
            f"grid misaligned: dt*m = {g.dt * cfg.m} but c*tau = {p.ctau}"
        )


def read_shifted(g: GridProfile, k: int, zero_left: bool = False) -> np.ndarray:
    """Array of g at index offsets i - k; off-grid indices use the extension
    policy (or zero on the left when zero_left, matching the BVP solve)."""
    n = g.n
    idx = np.arange(n) - k
    out = np.empty(n)
    inside = (idx >= 0) & (idx < n)
    out[inside] = g.values[idx[inside]]
    below = idx < 0
    if np.any(below):
        if zero_left:
            out[below] = 0.0
        else:
            out[below] = g.values[0] * np.exp(g.left_rate * g.dt * idx[below])
    out[idx >= n] = g.right_value
    return out


def shift(g: GridProfile, p: ModelParams, cfg: OperatorConfig) -> GridProfile:
    """(S g)(t) = g(t - c*tau), exact on the aligned grid."""
    check_aligned(g, p, cfg)
    vals = read_shifted(g, cfg.m)
    return replace(g, values=vals)


def resolvent_values(
    g: GridProfile, p: ModelParams, cfg: OperatorConfig, zero_left: bool = False
) -> np.ndarray:
    acc = g.values.copy()
    w = 1.0
    for j in range(1, cfg.J + 1):
        w *= p.b
        acc += w * read_shifted(g, j * cfg.m, zero_left=zero_left)
    return acc


def resolvent_B(g: GridProfile, p: ModelParams, cfg: OperatorConfig) -> GridProfile:
    """B = (I - bS)^{-1} via the truncated geometric series sum b^j S^j."""
    check_aligned(g, p, cfg)
    vals = resolvent_values(g, p, cfg)
    geo = (1.0 - p.b ** (cfg.J + 1)) / (1.0 - p.b) if p.b > 0.0 else 1.0
    return replace(g, values=vals, right_value=g.right_value * geo)


def op_L(g: GridProfile, p: ModelParams, cfg: OperatorConfig) -> GridProfile:
    """L = S B."""
    return shift(resolvent_B(g, p, cfg), p, cfg)


def op_F(g: GridProfile, p: ModelParams, cfg: OperatorConfig) -> GridProfile:
    """F(g) = (Bg) * (1 - (1-b) * (SBg)), the reaction in resolvent form."""
    check_aligned(g, p, cfg)
    Bg = resolvent_B(g, p, cfg)
    SBg = shift(Bg, p, cfg)
    vals = Bg.values * (1.0 - (1.0 - p.b) * SBg.values)
    right = Bg.right_value * (1.0 - (1.0 - p.b) * Bg.right_value)
    return replace(g, values=vals, right_value=right, left_rate=g.left_rate)


def qm_defect(
    g_low: GridProfile, g_high: GridProfile, p: ModelParams, cfg: OperatorConfig
) -> float:
    """min over the grid of F(g_high) - F(g_low) + L(g_high - g_low).

    Nonnegative in theory: this is the order-preservation property of F + L
    that drives the monotone iteration.
    """
    if np.any(g_low.values > g_high.values) or np.any(g_low.values < -1e-12) or np.any(
        g_high.values > 1.0 + 1e-12
    ):
        raise DomainError("qm_defect requires 0 <= g_low <= g_high <= 1 pointwise")
    f_hi = op_F(g_high, p, cfg).values
    f_lo = op_F(g_low, p, cfg).values
    l_hi = op_L(g_high, p, cfg).values
    l_lo = op_L(g_low, p, cfg).values
    return float(np.min(f_hi - f_lo + l_hi - l_lo))


# ---------------------------------------------------------------------------
# profile file format (shared with the solver and the CLI)

_HEADER_KEYS = ("b", "tau", "c", "m", "t_start", "dt", "n", "left_rate", "right_value")


def write_profile(
    fh: TextIO, g: GridProfile, p: ModelParams, cfg: OperatorConfig
) -> None:
    meta = {
        "b": p.b,
        "tau": p.tau,
        "c": p.c,
        "m": cfg.m,
        "t_start": g.t_start,
        "dt": g.dt,
        "n": g.n,
        "left_rate": g.left_rate,
        "right_value": g.right_value,
    }
    for key in _HEADER_KEYS:
        fh.write(f"# {key}={meta[key]:.17g}\n")
    t = g.t
    for i in range(g.n):
        fh.write(f"{t[i]:.17g},{g.values[i]:.17g}\n")


def read_profile(fh: TextIO):
    """Returns (GridProfile, ModelParams, OperatorConfig) from the CSV format."""
    meta = {}
    rows = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key.strip()] = float(val)
            continue
        t_str, _, v_str = line.partition(",")
        rows.append((float(t_str), float(v_str)))
    missing = [k for k in _HEADER_KEYS if k not in meta]
    if missing:
        raise DomainError(f"profile header missing keys: {missing}")
    if len(rows) != int(meta["n"]):
        raise DomainError(
            f"profile row count {len(rows)} does not match header n={int(meta['n'])}"
        )
    p = ModelParams(b=meta["b"], tau=meta["tau"], c=meta["c"])
    cfg = make_config(p, m=int(meta["m"]))
    g = GridProfile(
        t_start=meta["t_start"],
        dt=meta["dt"],
        values=np.array([v for _, v in rows]),
        left_rate=meta["left_rate"],
        right_value=meta["right_value"],
    )
    check_aligned(g, p, cfg)
    return g, p, cfg
