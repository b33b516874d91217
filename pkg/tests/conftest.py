"""Shared fixtures: one benchmark front solve reused across test modules."""

import pytest

from neutralfront.params import ModelParams
from neutralfront.solver import SolveOptions, solve_front

BENCH_P = ModelParams(b=0.2, tau=0.2, c=3.0)
BENCH_OPTS = SolveOptions(T=50.0, m=16, tol=1e-8)


@pytest.fixture(scope="session")
def bench_report():
    return solve_front(BENCH_P, BENCH_OPTS)
