"""Closed-form aged waiting-time laws for exponential and Pareto renewals.

The Pareto law used throughout is

    psi(tau) = (mu - 1) * theta**(mu - 1) / (tau + theta)**mu,

with survival ``(theta / (tau + theta))**(mu - 1)`` and mean
``theta / (mu - 2)`` for ``mu > 2``.
"""
import math
from dataclasses import dataclass

from errors import UnsupportedRegimeError, ValidationError


@dataclass(frozen=True)
class ParetoLaw:
    """Shifted Pareto waiting-time law.

    Attributes:
        mu: Tail exponent of the density, > 1
        theta: Scale, > 0
    """
    mu: float
    theta: float = 1.0

    def __post_init__(self) -> None:
        if not self.mu > 1:
            raise ValidationError(f"Pareto exponent must exceed 1, got mu={self.mu}")
        if not self.theta > 0:
            raise ValidationError(f"Pareto scale must be positive, got theta={self.theta}")

    @property
    def mean(self) -> float:
        """Get the mean waiting time, defined only for mu > 2."""
        if self.mu <= 2:
            raise UnsupportedRegimeError(f"Mean waiting time diverges for mu={self.mu} <= 2")
        return self.theta / (self.mu - 2)


def aged_pdf_exponential(lam: float, t_a: float, tau: float) -> float:
    """Density of the wait from the window end for an exponential renewal.

    By memorylessness it does not depend on ``t_a``.
    """
    if lam <= 0:
        raise ValidationError(f"Rate must be positive, got {lam}")
    if tau < 0 or t_a < 0:
        raise ValidationError("Latency and waiting time must be non-negative")
    return lam * math.exp(-lam * tau)


def aged_pdf_exponential_window_start(lam: float, t_a: float, tau: float) -> float:
    """Density of the full interval measured from the window start.

    Conditional on the interval outliving the window, supported on ``tau >= t_a``.
    """
    if lam <= 0:
        raise ValidationError(f"Rate must be positive, got {lam}")
    if tau < t_a:
        return 0.0
    return lam * math.exp(-lam * (tau - t_a))


def aged_pdf_pareto(law: ParetoLaw, t_a: float, tau: float) -> float:
    """Asymptotic aged density of a Pareto renewal with 2 < mu < 3.

    Uses the constant renewal rate ``(mu - 2) / theta`` reached at large ages.
    ``t_a = math.inf`` returns the limit law, a Pareto density of exponent
    ``mu - 1``.

    Raises:
        UnsupportedRegimeError: If mu is outside (2, 3)
    """
    if not 2 < law.mu < 3:
        raise UnsupportedRegimeError(f"Aged Pareto density needs 2 < mu < 3, got {law.mu}")
    if tau < 0 or t_a < 0:
        raise ValidationError("Latency and waiting time must be non-negative")
    mu, theta = law.mu, law.theta
    prefactor = (mu - 2) * theta ** (mu - 2)
    young = (tau + theta) ** (1 - mu)
    old = 0.0 if math.isinf(t_a) else (t_a + tau + theta) ** (1 - mu)
    return prefactor * (young - old)


def survival_pareto(law: ParetoLaw, tau: float, aged: bool = False) -> float:
    """Probability that a waiting time exceeds ``tau``.

    Args:
        law: Pareto law
        tau: Waiting time
        aged: Use the infinitely aged law, exponent ``mu - 2``

    Raises:
        UnsupportedRegimeError: If ``aged`` and mu <= 2
    """
    if tau < 0:
        raise ValidationError(f"Waiting time must be non-negative, got {tau}")
    if aged and law.mu <= 2:
        raise UnsupportedRegimeError(f"Aged survival needs mu > 2, got {law.mu}")
    exponent = law.mu - 2 if aged else law.mu - 1
    return (law.theta / (tau + law.theta)) ** exponent
