"""Numerical toolkit for monotone wavefronts of the neutral KPP-Fisher
equation

    d/dt [u - b u(t - tau, x)] = d^2/dx^2 [u - b u(t - tau, x)]
                                 + u (1 - u(t - tau, x)).

Modules: spectral (characteristic roots), curves (critical speed curves and
the existence domain), gridops (discrete shift/resolvent operators and the
profile file format), bounds (explicit sub/super-solutions), solver (monotone
iteration with a Gauss-Newton polish), evolver (direct PDE time integration),
cli (command-line front end).
"""

from .params import DomainError, ModelParams, NumericsError
from .spectral import SpectralRoots, chi0, chi1, find_roots
from .curves import (
    CurveSample,
    DomainVerdict,
    c_hash,
    c_star,
    curve_ode_check,
    in_domain,
    intersection,
    tau_critical,
    wu_zou_bound,
)
from .gridops import (
    GridProfile,
    OperatorConfig,
    make_config,
    op_F,
    op_L,
    qm_defect,
    read_profile,
    resolvent_B,
    shift,
    write_profile,
)
from .bounds import build_sub, build_super, residual_pew
from .solver import (
    CriticalReport,
    IterationReport,
    SolveOptions,
    critical_solve,
    n1_identity_check,
    reconstruct_u,
    residual_pe,
    residual_pew_sup,
    solve_front,
    tail_slope,
    uniqueness_check,
)
from .evolver import EvolveResult, evolve

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ModelParams",
    "NumericsError",
    "SpectralRoots",
    "chi0",
    "chi1",
    "find_roots",
    "CurveSample",
    "DomainVerdict",
    "c_hash",
    "c_star",
    "curve_ode_check",
    "in_domain",
    "intersection",
    "tau_critical",
    "wu_zou_bound",
    "GridProfile",
    "OperatorConfig",
    "make_config",
    "op_F",
    "op_L",
    "qm_defect",
    "read_profile",
    "resolvent_B",
    "shift",
    "write_profile",
    "build_sub",
    "build_super",
    "residual_pew",
    "CriticalReport",
    "IterationReport",
    "SolveOptions",
    "critical_solve",
    "n1_identity_check",
    "reconstruct_u",
    "residual_pe",
    "residual_pew_sup",
    "solve_front",
    "tail_slope",
    "uniqueness_check",
    "EvolveResult",
    "evolve",
]
