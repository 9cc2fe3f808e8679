"""Barotropic pressure law p(rho) = kappa * rho**gamma."""

from __future__ import annotations

from dataclasses import dataclass

from laap_lab.errors import DomainError, RejectedInputError


def _check_rho(rho: float) -> float:
    if not rho > 0.0:
        raise DomainError(f"density must be positive, got {rho!r}")
    return rho


@dataclass(frozen=True)
class PressureLaw:
    """Polytropic barotropic law.

    The specific internal energy is normalised so that eps(rho) -> 0 as
    rho -> 0+, which is finite because gamma > 1.
    """

    kappa: float = 1.0
    gamma: float = 2.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "gamma", float(self.gamma))
        if not self.kappa > 0.0:
            raise RejectedInputError(f"kappa must be positive, got {self.kappa!r}")
        if not self.gamma > 1.0:
            raise RejectedInputError(f"gamma must exceed 1, got {self.gamma!r}")

    def pressure(self, rho: float) -> float:
        return self.kappa * _check_rho(rho) ** self.gamma

    def dpressure(self, rho: float) -> float:
        """dp/drho."""
        return self.kappa * self.gamma * _check_rho(rho) ** (self.gamma - 1.0)

    def internal_energy(self, rho: float) -> float:
        return self.kappa * _check_rho(rho) ** (self.gamma - 1.0) / (self.gamma - 1.0)

    def enthalpy_like(self, rho: float) -> float:
        """eps(rho) + p(rho)/rho, strictly increasing in rho."""
        return self.internal_energy(rho) + self.pressure(rho) / rho


def pressure(law: PressureLaw, rho: float) -> float:
    return law.pressure(rho)


def dpressure(law: PressureLaw, rho: float) -> float:
    return law.dpressure(rho)


def internal_energy(law: PressureLaw, rho: float) -> float:
    return law.internal_energy(rho)


def enthalpy_like(law: PressureLaw, rho: float) -> float:
    return law.enthalpy_like(rho)
