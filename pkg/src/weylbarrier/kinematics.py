"""Plane-wave kinematics for a positive-helicity Weyl fermion hitting a step in x.

Momenta are carried in momentum units; ``c`` converts them to energies.
With the default ``c = hbar = 1`` the distinction disappears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, SingularityError

EPS_REGIME = 1e-9
SPINOR_TOL = 1e-12


class Regime(str, Enum):
    DIFFUSION = "Diffusion"
    KLEIN = "Klein"
    EVANESCENT = "Evanescent"
    BOUNDARY = "Boundary"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Kinematics:
    """Incoming energy, transverse momenta and potential height.

    The incoming beam comes from x = -inf with positive energy ``E`` and
    momentum (p1, p2, p3); the step of height ``V0`` sits at x = 0.
    """

    E: float
    V0: float = 0.0
    p2: float = 0.0
    p3: float = 0.0
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("E", "V0", "p2", "p3", "c", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.E <= 0:
            raise DomainError(f"incoming energy must be positive, got E={self.E}")
        if self.c <= 0 or self.hbar <= 0:
            raise DomainError("c and hbar must be positive")
        if self.V0 < 0:
            raise DomainError(f"V0 must be >= 0, got {self.V0}")
        if self.E**2 < self.transverse_energy**2:
            raise DomainError(
                f"E={self.E} below transverse energy {self.transverse_energy}: "
                "no propagating incoming wave"
            )

    @property
    def transverse_energy(self) -> float:
        """sqrt(p2^2 + p3^2) * c"""
        return math.hypot(self.p2, self.p3) * self.c

    @property
    def p1(self) -> float:
        return longitudinal_momentum(self)

    @property
    def q1(self) -> complex:
        return barrier_momentum(self)

    @property
    def grazing(self) -> bool:
        """True at p1 = 0; step amplitudes are singular there."""
        return self.p1 == 0.0

    @property
    def regime(self) -> Regime:
        return classify_regime(self)


@dataclass(frozen=True)
class LongitudinalMomenta:
    p1: float
    q1: complex


def longitudinal_momentum(kin: Kinematics) -> float:
    """Return p1 >= 0 with p1 c = sqrt(E^2 - (p2 c)^2 - (p3 c)^2)."""
    c = kin.c
    arg = kin.E**2 - (kin.p2 * c) ** 2 - (kin.p3 * c) ** 2
    if arg < 0:
        raise DomainError("E^2 < (p2 c)^2 + (p3 c)^2: no propagating incoming wave")
    return math.sqrt(arg) / c


def barrier_momentum(kin: Kinematics) -> complex:
    """Return q1 in region II.

    Real and non-negative (principal root) whenever (E - V0)^2 exceeds the
    transverse energy squared, in the diffusion and in the Klein zone alike.
    Otherwise ``i |q1|``, which decays for x -> +inf.
    """
    c = kin.c
    arg = (kin.E - kin.V0) ** 2 - (kin.p2 * c) ** 2 - (kin.p3 * c) ** 2
    if arg >= 0:
        return complex(math.sqrt(arg) / c, 0.0)
    return complex(0.0, math.sqrt(-arg) / c)


def momenta(kin: Kinematics) -> LongitudinalMomenta:
    return LongitudinalMomenta(longitudinal_momentum(kin), barrier_momentum(kin))


def classify_regime(kin: Kinematics, eps: float = EPS_REGIME) -> Regime:
    """Tag the energy zone.

    Within ``eps * E`` of either threshold V0 +- sqrt(p2^2 + p3^2) c the
    configuration is tagged Boundary, since alpha or N blow up there.
    """
    tol = eps * kin.E
    upper = kin.V0 + kin.transverse_energy
    lower = kin.V0 - kin.transverse_energy
    if abs(kin.E - upper) < tol or abs(kin.E - lower) < tol:
        return Regime.BOUNDARY
    if kin.E > upper:
        return Regime.DIFFUSION
    if kin.E < lower:
        return Regime.KLEIN
    return Regime.EVANESCENT


def spinor(p1: float, p2: float, p3: float, E: float, c: float = 1.0) -> np.ndarray:
    """Unit positive-helicity spinor sqrt((E+p3c)/2E) [1, (p1c + i p2c)/(E+p3c)].

    ``p1`` is signed (reflected waves use -p1). ``E`` may be the negative
    kinetic energy E - V0 of the Klein zone; the prefactor then stays real
    because E + p3c has the same sign as E.
    """
    denom = E + p3 * c
    scale = max(abs(E), abs(p3 * c), 1.0)
    if abs(denom) <= SPINOR_TOL * scale or E == 0:
        raise SingularityError(f"singular spinor normalisation: E + p3 c = {denom}")
    ratio = denom / (2.0 * E)
    if ratio < 0:
        raise SingularityError("E + p3 c and E have opposite signs; spinor not normalisable")
    return math.sqrt(ratio) * np.array([1.0, (p1 * c + 1j * p2 * c) / denom], dtype=complex)
