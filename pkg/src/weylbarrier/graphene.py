"""Graphene specialisation: p3 = 0, c -> v_F, incidence angle phi."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy import constants

from .barrier import BarrierConfig, closed_form
from .errors import RegimeError, SingularityError
from .kinematics import Kinematics, Regime, classify_regime

# hbar * v_F in eV nm for v_F = 1e6 m/s
HBAR_VF_EV_NM = constants.hbar * 1e6 / constants.e * 1e9


def device_units(v_F: float = 1e6) -> dict[str, float]:
    """Kinematics constants for energies in eV and lengths in nm.

    With hbar = 1 momenta are wavenumbers in 1/nm, and the speed constant
    becomes hbar v_F expressed in eV nm (about 0.658 for 1e6 m/s).
    """
    return {"c": constants.hbar * v_F / constants.e * 1e9, "hbar": 1.0}


@dataclass(frozen=True)
class GrapheneConfig:
    E: float
    V0: float
    phi: float
    L: float
    v_F: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not abs(self.phi) < math.pi / 2:
            raise ValueError(f"incidence angle must satisfy |phi| < pi/2, got {self.phi}")
        if self.E <= 0:
            raise ValueError("E must be positive")

    @property
    def p2(self) -> float:
        return self.E / self.v_F * math.sin(self.phi)

    @property
    def kinematics(self) -> Kinematics:
        return Kinematics(self.E, self.V0, self.p2, 0.0, self.v_F, self.hbar)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.kinematics)


@dataclass(frozen=True)
class GrapheneTransmission:
    T: float
    regime: Regime
    formal: bool


def _real_q1(kin: Kinematics) -> float:
    regime = classify_regime(kin)
    if regime not in (Regime.DIFFUSION, Regime.KLEIN):
        raise RegimeError(f"needs real q1; regime is {regime}")
    q1 = kin.q1.real
    if q1 == 0.0:
        raise SingularityError("q1 = 0: refraction angle undefined")
    return q1


def refraction_angle(cfg: GrapheneConfig) -> float:
    """theta = arctan(p2 / q1) with q1 >= 0, so theta carries the sign of p2."""
    kin = cfg.kinematics
    return math.atan(kin.p2 / _real_q1(kin))


def transmission_graphene(cfg: GrapheneConfig) -> GrapheneTransmission:
    """Transmission probability in the angle form standard for graphene.

    |t|^2 = 1 / [cos^2(q1 L) + ((sgn E sgn(E - V0) - sin phi sin theta)
                               / (cos phi cos theta))^2 sin^2(q1 L)]

    Klein-zone values are returned but flagged ``formal``.
    """
    kin = cfg.kinematics
    q1 = _real_q1(kin)
    theta = math.atan(kin.p2 / q1)
    cos_t = math.cos(theta)
    if cos_t == 0.0:
        raise SingularityError("cos(theta) = 0")
    sgn = math.copysign(1.0, cfg.E) * math.copysign(1.0, cfg.E - cfg.V0)
    factor = (sgn - math.sin(cfg.phi) * math.sin(theta)) / (math.cos(cfg.phi) * cos_t)
    phase = q1 * cfg.L / cfg.hbar
    T = 1.0 / (math.cos(phase) ** 2 + factor**2 * math.sin(phase) ** 2)
    regime = classify_regime(kin)
    return GrapheneTransmission(T, regime, formal=regime is Regime.KLEIN)


def general_transmission(cfg: GrapheneConfig) -> float:
    """|t|^2 from the general barrier closed form at p3 = 0, c = v_F."""
    return closed_form(BarrierConfig(cfg.kinematics, cfg.L), formal=True).T


def chiral_ratio(kin: Kinematics) -> float:
    """[E (E - V0) / c^2 - p2^2 - p3^2] / (p1 q1), equal to (1 + |alpha|^2) / (2 Re alpha)."""
    return (kin.E * (kin.E - kin.V0) / kin.c**2 - kin.p2**2 - kin.p3**2) / (kin.p1 * _real_q1(kin))


def angle_identities(cfg: GrapheneConfig) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Both sides of (E/(p1 v_F), (E-V0)/(q1 v_F), p2^2/(p1 q1)) = (sgnE/cos phi, sgn(E-V0)/cos theta, tan phi tan theta)."""
    kin = cfg.kinematics
    q1 = _real_q1(kin)
    p1 = kin.p1
    theta = refraction_angle(cfg)
    lhs = (cfg.E / (p1 * cfg.v_F), (cfg.E - cfg.V0) / (q1 * cfg.v_F), kin.p2**2 / (p1 * q1))
    rhs = (
        math.copysign(1.0, cfg.E) / math.cos(cfg.phi),
        math.copysign(1.0, cfg.E - cfg.V0) / math.cos(theta),
        math.tan(cfg.phi) * math.tan(theta),
    )
    return lhs, rhs


@dataclass
class TransmissionMap:
    """|t|^2 on a (phi, E) or (phi, L) grid; row index runs over the second axis."""

    phi: np.ndarray
    axis_name: str
    axis: np.ndarray
    T: np.ndarray
    regime: np.ndarray
    formal: np.ndarray
    E: float | None = None
    V0: float = 0.0
    L: float | None = None

    def records(self) -> Iterator[dict]:
        for i, a in enumerate(self.axis):
            E = a if self.axis_name == "E" else self.E
            L = a if self.axis_name == "L" else self.L
            for j, phi in enumerate(self.phi):
                yield {
                    "phi": float(phi),
                    "E": float(E),
                    "V0": float(self.V0),
                    "L": float(L),
                    "T": float(self.T[i, j]),
                    "regime": str(self.regime[i, j]),
                    "formal": bool(self.formal[i, j]),
                }


def _cell(E: float, V0: float, phi: float, L: float, v_F: float, hbar: float) -> tuple[float, str, bool]:
    cfg = GrapheneConfig(E, V0, phi, L, v_F, hbar)
    regime = cfg.regime
    if regime not in (Regime.DIFFUSION, Regime.KLEIN):
        return math.nan, str(regime), False
    try:
        res = transmission_graphene(cfg)
    except SingularityError:
        return math.nan, str(Regime.BOUNDARY), False
    return res.T, str(res.regime), res.formal


def _fill(phis, axis, axis_name, cell) -> TransmissionMap:
    phis = np.asarray(phis, dtype=float)
    axis = np.asarray(axis, dtype=float)
    T = np.empty((axis.size, phis.size))
    regime = np.empty((axis.size, phis.size), dtype=object)
    formal = np.zeros((axis.size, phis.size), dtype=bool)
    for i, a in enumerate(axis):
        for j, phi in enumerate(phis):
            T[i, j], regime[i, j], formal[i, j] = cell(a, phi)
    return TransmissionMap(phis, axis_name, axis, T, regime, formal)


def angular_map(E: float, V0: float, L: float, phis: Sequence[float],
                v_F: float = 1.0, hbar: float = 1.0) -> TransmissionMap:
    """One energy row |t|^2(phi). Evanescent and boundary cells are NaN, tagged."""
    m = _fill(phis, [E], "E", lambda e, phi: _cell(e, V0, phi, L, v_F, hbar))
    m.E, m.V0, m.L = E, V0, L
    return m


def energy_map(energies: Sequence[float], V0: float, L: float, phis: Sequence[float],
               v_F: float = 1.0, hbar: float = 1.0) -> TransmissionMap:
    m = _fill(phis, energies, "E", lambda e, phi: _cell(e, V0, phi, L, v_F, hbar))
    m.V0, m.L = V0, L
    return m


def width_map(widths: Sequence[float], E: float, V0: float, phis: Sequence[float],
              v_F: float = 1.0, hbar: float = 1.0) -> TransmissionMap:
    m = _fill(phis, widths, "L", lambda w, phi: _cell(E, V0, phi, w, v_F, hbar))
    m.E, m.V0 = E, V0
    return m
