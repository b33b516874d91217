"""Direct PDE time integration as a cross-check of the front solver."""

import numpy as np
import pytest

from neutralfront import evolver
from neutralfront.gridops import GridProfile
from neutralfront.params import DomainError, ModelParams

from conftest import BENCH_P


def test_front_travels_at_speed_c(bench_report):
    result = evolver.evolve(bench_report.profile_u, BENCH_P, horizon=3.0, dx=0.05)
    assert abs(result.speed_estimate + BENCH_P.c) / BENCH_P.c <= 0.02
    assert result.shape_error <= 0.02
    # the front moves left monotonically
    assert np.all(np.diff(result.front_positions) < 0.0)


def test_equilibrium_preserved():
    p = ModelParams(b=0.2, tau=0.2, c=3.0)
    g = GridProfile(t_start=-20.0, dt=0.1, values=np.ones(401),
                    left_rate=0.0, right_value=1.0)
    state = evolver.make_state(g, p, horizon=1.0, dx=0.05)
    for _ in range(200):
        evolver.step(state, p)
    assert np.max(np.abs(state.u - 1.0)) <= 1e-12


def test_cfl_violation_rejected(bench_report):
    with pytest.raises(DomainError):
        evolver.evolve(bench_report.profile_u, BENCH_P, horizon=1.0,
                       dx=0.05, dt_time=0.01)


def test_dt_must_divide_tau(bench_report):
    with pytest.raises(DomainError):
        evolver.evolve(bench_report.profile_u, BENCH_P, horizon=1.0,
                       dx=0.5, dt_time=0.0301)


def test_shape_error_shrinks_under_refinement(bench_report):
    coarse = evolver.evolve(bench_report.profile_u, BENCH_P, horizon=2.0, dx=0.1)
    fine = evolver.evolve(bench_report.profile_u, BENCH_P, horizon=2.0, dx=0.05)
    assert fine.shape_error < coarse.shape_error
    assert coarse.shape_error / fine.shape_error >= 1.8


def test_invalid_arguments():
    g = GridProfile(t_start=0.0, dt=0.1, values=np.linspace(0.0, 1.0, 11),
                    right_value=1.0)
    p = ModelParams(b=0.1, tau=0.5, c=2.5)
    with pytest.raises(DomainError):
        evolver.make_state(g, p, horizon=-1.0)
    with pytest.raises(DomainError):
        evolver.make_state(g, p, horizon=1.0, dx=0.0)
