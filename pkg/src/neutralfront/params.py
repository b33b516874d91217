"""Model parameters and shared error types."""

from dataclasses import dataclass, field


class NumericsError(RuntimeError):
    """A numeric procedure failed (lost bracket, no convergence, singular system)."""


class DomainError(ValueError):
    """Evaluation requested outside the analyticity strip or with invalid data."""


@dataclass(frozen=True)
class ModelParams:
    """The triple (b, tau, c) of the neutral wave problem.

    b is the neutral coefficient (0 <= b < 1, b = 0 is the classical delayed
    equation), tau the delay and c the wave speed.  ctau = c*tau is the delay
    seen by the wave profile and is cached because every operator uses it.
    """

    b: float
    tau: float
    c: float
    trunc_tol: float = 1e-14
    ctau: float = field(init=False)

    def __post_init__(self):
        if not (0.0 <= self.b < 1.0):
            raise DomainError(f"b must satisfy 0 <= b < 1, got {self.b}")
        if not self.tau > 0.0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        if not self.c > 0.0:
            raise DomainError(f"c must be positive, got {self.c}")
        if not (0.0 < self.trunc_tol < 1.0):
            raise DomainError(f"trunc_tol must lie in (0, 1), got {self.trunc_tol}")
        object.__setattr__(self, "ctau", self.c * self.tau)
