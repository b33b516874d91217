"""Direct time integration of the neutral PDE as a cross-check.

The neutral term is removed by evolving v = u - b u(t - tau, .) with an
explicit Euler / 3-point Laplacian step and reconstructing u from the delay
history, which turns the neutral equation into a retarded one plus an
algebraic recursion.  A front profile fed in as initial data should travel
left at speed c with invariant shape; the returned speed and shape defects
quantify how well it does.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .gridops import GridProfile
from .params import DomainError, ModelParams, NumericsError

BOUNDARY_MARGIN = 10.0


@dataclass
class EvolveState:
    """Spatial grid, time step tied to the delay, and the u-history ring."""

    dx: float
    x: np.ndarray
    dt_time: float
    k: int  # tau = k * dt_time exactly
    history: List[np.ndarray]  # u-slices at t - k dt .. t (length k+1)
    v: np.ndarray
    # equilibrium values held at the box ends (0/1 for a front, 1/1 when
    # started at the upper equilibrium)
    clamp: tuple = (0.0, 1.0)

    @property
    def u(self) -> np.ndarray:
        return self.history[-1]


@dataclass
class EvolveResult:
    speed_estimate: float
    shape_error: float
    times: np.ndarray
    front_positions: np.ndarray
    final_u: np.ndarray
    x: np.ndarray


def _front_position(x: np.ndarray, u: np.ndarray, level: float = 0.5) -> float:
    idx = np.nonzero((u[:-1] < level) & (u[1:] >= level))[0]
    if idx.size == 0:
        raise NumericsError(f"evolved slice never crosses level {level}")
    i = int(idx[0])
    return float(x[i] + (level - u[i]) / (u[i + 1] - u[i]) * (x[i + 1] - x[i]))


def make_state(
    profile_u: GridProfile,
    p: ModelParams,
    horizon: float,
    dx: float = 0.05,
    dt_time: Optional[float] = None,
) -> EvolveState:
    """Grid sized so the left-moving front keeps clear of both boundaries
    (extent >= c*horizon + 40), history initialized from the traveling-wave
    ansatz u(s, x) = phi(x + c s) for s in [-tau, 0]."""
    if horizon <= 0.0 or dx <= 0.0:
        raise DomainError("need horizon > 0 and dx > 0")
    if dt_time is None:
        k = max(1, math.ceil(p.tau / (0.5 * dx * dx)))
        dt_time = p.tau / k
    else:
        k = round(p.tau / dt_time)
        if k < 1 or abs(k * dt_time - p.tau) > 1e-12 * p.tau:
            raise DomainError(f"dt_time = {dt_time} does not divide tau = {p.tau}")
        if dt_time > 0.5 * dx * dx:
            raise DomainError(
                f"CFL violation: dt_time = {dt_time} > dx^2/2 = {0.5 * dx * dx}"
            )
    try:
        s0 = _front_position(profile_u.t, profile_u.values)
    except NumericsError:
        # no front in the initial data (equilibrium run): center the box
        s0 = 0.5 * (profile_u.t_start + profile_u.t_end)
    x_lo = s0 - p.c * horizon - 20.0
    x_hi = s0 + 20.0
    nx = int(math.ceil((x_hi - x_lo) / dx)) + 1
    x = x_lo + dx * np.arange(nx)
    history = [
        np.asarray(profile_u.sample(x - p.c * j * dt_time)) for j in range(k, -1, -1)
    ]
    v = history[-1] - p.b * history[0]
    clamp = (
        0.0 if history[-1][0] < 0.5 else 1.0,
        0.0 if history[-1][-1] < 0.5 else 1.0,
    )
    return EvolveState(dx=dx, x=x, dt_time=dt_time, k=k, history=history, v=v, clamp=clamp)


def step(state: EvolveState, p: ModelParams) -> None:
    """One explicit Euler update of v, then u from the delay recursion."""
    u = state.history[-1]
    u_delay = state.history[-1 - state.k]
    v = state.v
    lap = np.zeros_like(v)
    lap[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (state.dx * state.dx)
    v_new = v + state.dt_time * (lap + u * (1.0 - u_delay))
    # after the shift below, history[-state.k] is the slice at t + dt - tau
    u_new = v_new + (p.b * state.history[-state.k] if p.b > 0.0 else 0.0)
    u_new[0], u_new[-1] = state.clamp
    v_new[0] = u_new[0] - p.b * state.history[-state.k][0]
    v_new[-1] = u_new[-1] - p.b * state.history[-state.k][-1]
    state.history.pop(0)
    state.history.append(u_new)
    state.v = v_new


def evolve(
    profile_u: GridProfile,
    p: ModelParams,
    horizon: float = 10.0,
    dx: float = 0.05,
    dt_time: Optional[float] = None,
    sample_every: int = 16,
) -> EvolveResult:
    """Run the front for the given horizon and report the measured speed and
    the final-time shape defect against the traveling-wave prediction.

    The profile moves left, so speed_estimate is negative; compare its
    magnitude with c.
    """
    state = make_state(profile_u, p, horizon, dx=dx, dt_time=dt_time)
    n_steps = int(round(horizon / state.dt_time))
    times = [0.0]
    fronts = [_front_position(state.x, state.u)]
    for n in range(1, n_steps + 1):
        step(state, p)
        if n % sample_every == 0 or n == n_steps:
            pos = _front_position(state.x, state.u)
            if pos - state.x[0] < BOUNDARY_MARGIN or state.x[-1] - pos < BOUNDARY_MARGIN:
                raise NumericsError(
                    f"front at {pos} within {BOUNDARY_MARGIN} of a boundary"
                )
            times.append(n * state.dt_time)
            fronts.append(pos)
        if np.min(state.u) < -1e-9 or np.max(state.u) > 1.0 + 5e-2:
            raise NumericsError("evolved solution left the [0, 1] comparison band")
    times = np.array(times)
    fronts = np.array(fronts)
    second_half = times >= 0.5 * horizon
    speed = float(np.polyfit(times[second_half], fronts[second_half], 1)[0])
    t_end = n_steps * state.dt_time
    predicted = np.asarray(profile_u.sample(state.x + p.c * t_end))
    shape_error = float(np.max(np.abs(state.u - predicted)))
    return EvolveResult(
        speed_estimate=speed,
        shape_error=shape_error,
        times=times,
        front_positions=fronts,
        final_u=state.u,
        x=state.x,
    )
