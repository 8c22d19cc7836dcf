"""Single-discontinuity amplitudes.

Three step configurations enter the barrier problem:

* ``STEP1`` at x = 0, wave incoming from the left with p1;
* ``STEP2`` at x = L, wave incoming from inside the barrier with q1;
* ``STEP3`` at x = 0, wave incoming from inside the barrier with -q1.

All of them are written in terms of a single complex factor ``alpha`` and the
ratio ``N`` of spinor normalisations in the two regions.  The step-2 and
step-3 factors (``beta`` and ``gamma = conj(beta)``) are derived from
``alpha``; their direct definitions are kept for cross-checking.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import RegimeError, SingularityError
from .kinematics import Kinematics, Regime, classify_regime

DENOM_TOL = 1e-12


class StepKind(str, Enum):
    STEP1 = "Step1_at0"
    STEP2 = "Step2_atL"
    STEP3 = "Step3_at0"


@dataclass(frozen=True)
class AlphaFactor:
    alpha: complex
    N: float

    @property
    def flux_factor(self) -> float:
        """Ratio of transmitted to incident current per |t0|^2: N^2 Re(alpha).

        Flux balance at the step reads |r0|^2 + flux_factor |t0|^2 = 1.
        """
        return self.N**2 * self.alpha.real


@dataclass(frozen=True)
class StepResult:
    r: complex
    t: complex
    which: StepKind


def _check_denominator(z: complex, alpha: complex) -> None:
    if abs(z) < DENOM_TOL * (1.0 + abs(alpha)):
        raise SingularityError(f"resonant denominator |1 + alpha| = {abs(z):.3e}")


def alpha_factor(kin: Kinematics, allow_evanescent: bool = False) -> AlphaFactor:
    """alpha = [q1 (E + p3 c) + i p2 V0] / [p1 (E - V0 + p3 c)] and N.

    ``allow_evanescent`` lets alpha be evaluated with imaginary q1 (only the
    step reflection probability uses this); N is NaN there when N^2 <= 0.
    """
    regime = classify_regime(kin)
    if regime in (Regime.EVANESCENT, Regime.BOUNDARY) and not allow_evanescent:
        raise RegimeError(f"alpha requires real q1; regime is {regime}")
    E, V0, c = kin.E, kin.V0, kin.c
    p1 = kin.p1
    if p1 == 0.0:
        raise SingularityError("grazing incidence p1 = 0: alpha diverges")
    inner = E - V0 + kin.p3 * c
    if inner == 0.0:
        raise SingularityError("E - V0 + p3 c = 0: alpha diverges")
    if E == V0 and not allow_evanescent:
        raise SingularityError("E = V0: normalisation N diverges")
    q1 = kin.q1
    if regime in (Regime.DIFFUSION, Regime.KLEIN):
        q1 = q1.real
    alpha = (q1 * (E + kin.p3 * c) + 1j * kin.p2 * V0) / (p1 * inner)
    n2 = E * inner / ((E - V0) * (E + kin.p3 * c)) if E != V0 else math.nan
    if regime in (Regime.DIFFUSION, Regime.KLEIN):
        assert n2 > 0, f"N^2 = {n2} must be positive for real q1"
    N = math.sqrt(n2) if n2 > 0 else math.nan
    return AlphaFactor(complex(alpha), N)


def beta_from_alpha(af: AlphaFactor) -> complex:
    """beta such that 1 - beta = (alpha - 1)/Re(alpha) and 1 + conj(beta) = (1 + alpha)/Re(alpha)."""
    a = af.alpha
    return (1.0 - 1j * a.imag) / a.real


def gamma_from_alpha(af: AlphaFactor) -> complex:
    return beta_from_alpha(af).conjugate()


def beta_direct(kin: Kinematics) -> complex:
    """[p1 (E - V0 + p3 c) - i p2 V0] / [q1 (E + p3 c)], the step-2 factor."""
    q1 = kin.q1.real
    c = kin.c
    return (kin.p1 * (kin.E - kin.V0 + kin.p3 * c) - 1j * kin.p2 * kin.V0) / (q1 * (kin.E + kin.p3 * c))


def gamma_direct(kin: Kinematics) -> complex:
    """Step-3 factor: the step-2 factor with p1 -> -p1 and q1 -> -q1."""
    q1 = kin.q1.real
    c = kin.c
    return (-kin.p1 * (kin.E - kin.V0 + kin.p3 * c) - 1j * kin.p2 * kin.V0) / (-q1 * (kin.E + kin.p3 * c))


def step1(kin: Kinematics, af: AlphaFactor | None = None) -> StepResult:
    """r0 = (1 - alpha)/(1 + alpha), t0 = 2 / [N (1 + alpha)]."""
    af = af or alpha_factor(kin)
    a = af.alpha
    _check_denominator(1 + a, a)
    return StepResult((1 - a) / (1 + a), 2.0 / (af.N * (1 + a)), StepKind.STEP1)


def step2(kin: Kinematics, L: float, af: AlphaFactor | None = None) -> StepResult:
    """Amplitudes at x = L for a wave e^{i q1 x} coming from inside the barrier.

    The phases refer to plane waves measured from the origin, so the
    reflected wave is r_L e^{-i q1 x} and the transmitted one t_L e^{i p1 x}.
    """
    if L < 0:
        raise ValueError(f"L must be >= 0, got {L}")
    af = af or alpha_factor(kin)
    a = af.alpha
    _check_denominator(1 + a.conjugate(), a)
    q1 = kin.q1.real
    hb = kin.hbar
    r = (a - 1) / (1 + a.conjugate()) * cmath.exp(2j * q1 * L / hb)
    t = 2 * af.N * a.real / (1 + a.conjugate()) * cmath.exp(1j * (q1 - kin.p1) * L / hb)
    return StepResult(r, t, StepKind.STEP2)


def step3(kin: Kinematics, af: AlphaFactor | None = None) -> StepResult:
    """r~0 = (alpha* - 1)/(1 + alpha), t~0 = 2 N Re(alpha)/(1 + alpha)."""
    af = af or alpha_factor(kin)
    a = af.alpha
    _check_denominator(1 + a, a)
    return StepResult((a.conjugate() - 1) / (1 + a), 2 * af.N * a.real / (1 + a), StepKind.STEP3)


def step_reflection_probability(kin: Kinematics) -> float:
    """|r0|^2 = (1 + |alpha|^2 - 2 Re alpha) / (1 + |alpha|^2 + 2 Re alpha).

    Defined in every zone with p1 > 0: above 1 in the Klein zone, exactly 1
    when q1 is imaginary (Re alpha = 0).
    """
    a = alpha_factor(kin, allow_evanescent=True).alpha
    m = 1.0 + abs(a) ** 2
    den = m + 2 * a.real
    _check_denominator(den, a)
    return (m - 2 * a.real) / den
